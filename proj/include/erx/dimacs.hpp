#pragma once

#include "erx/cnf.hpp"
#include "erx/solver.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace erx {

/// "p cnf <vars> <clauses>" followed by one 0-terminated clause per line.
/// Grid instances are preceded by "c" lines describing the variable map.
std::string write_dimacs(const CnfInstance& cnf);

/// Reads DIMACS CNF. Comment lines are skipped; clauses may span lines.
CnfInstance parse_dimacs(std::string_view text);

struct ExternalModel {
    bool satisfiable = false;
    Model model;  // var_count entries when satisfiable
};

/// Parses solver output in the SAT-competition convention: an
/// "s SATISFIABLE" / "s UNSATISFIABLE" line and "v" value lines ending in 0.
/// Variables missing from the v lines are an error.
ExternalModel parse_external_model(std::string_view text, int var_count);

/// Runs `command <cnf-file>` and parses its stdout. With a deadline the
/// command is wrapped in coreutils `timeout`; exit code 124 (or a kill) maps
/// to TIMEOUT.
SolveOutcome solve_external(const std::string& command, const CnfInstance& cnf,
                            std::optional<double> deadline_seconds);

}  // namespace erx

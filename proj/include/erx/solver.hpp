#pragma once

#include "erx/cnf.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace erx {

enum class SolveStatus { sat, unsat, timeout };

std::string_view status_name(SolveStatus s);

struct SolveOutcome {
    SolveStatus status = SolveStatus::unsat;
    Model model;  // var_count entries when status == sat, empty otherwise
    double elapsed = 0.0;  // seconds

    // Search statistics.
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
};

/// CDCL search: two-watched-literal propagation, first-UIP learning, VSIDS
/// with seeded tie-breaking and initial polarity, phase saving, Luby restarts.
///
/// The seed fully determines the search order, so equal (instance, seed)
/// without a deadline yields an equal outcome. `deadline_seconds` is measured
/// from the call and checked between propagation rounds.
SolveOutcome solve(const CnfInstance& cnf, std::uint64_t seed,
                   std::optional<double> deadline_seconds = std::nullopt);

/// True iff every clause has a satisfied literal. Throws if the model length
/// differs from var_count.
bool verify_model(const CnfInstance& cnf, const Model& model);

}  // namespace erx

#pragma once

#include "erx/corpus.hpp"
#include "erx/metrics.hpp"
#include "erx/patterns.hpp"
#include "erx/solver.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace erx {

enum class AttemptOutcome { success, failed, timed_out };

std::string_view outcome_name(AttemptOutcome o);
AttemptOutcome parse_outcome(std::string_view name);

struct AttemptRecord {
    std::size_t index = 0;
    std::optional<CellKey> cell;  // targeted cell; for baseline runs, the cell the level landed in
    TemplateKind template_kind = TemplateKind::nbr_plus;
    std::uint64_t seed = 0;
    AttemptOutcome outcome = AttemptOutcome::failed;
    double elapsed = 0.0;
    std::optional<TileGrid> level;  // success only
    int density = -1;               // success only
    int difficulty = -1;            // success only
};

/// What a generator reports for one request. `level` is set iff status is sat.
struct GenerationResult {
    SolveStatus status = SolveStatus::unsat;
    std::optional<TileGrid> level;
    double elapsed = 0.0;
};

/// Produces a level for a target cell (or with no count constraints when the
/// cell is empty) under a per-attempt seed and time limit in seconds.
using Generator = std::function<GenerationResult(std::optional<CellKey> cell, std::uint64_t seed,
                                                 double timeout)>;

/// Scheduler state for one exploration run.
struct ExplorationState {
    AxesSpec axes;
    std::map<CellKey, int> counts;  // every cell of the axes
    std::set<CellKey> blocklist;
    int threshold = 10;
    double budget = 43200.0;          // seconds
    double attempt_timeout = 900.0;   // seconds
    double spent = 0.0;               // seconds
    std::mt19937_64 rng;
};

/// Seeds counts from the corpus histogram (out-of-range segments ignored);
/// cells already at the threshold start blocklisted.
ExplorationState init_state(const std::vector<TileGrid>& corpus, const TileCatalog& catalog,
                            const AxesSpec& axes, int threshold, double budget,
                            double attempt_timeout, std::uint64_t seed);

/// Uniformly random among the non-blocklisted cells with the fewest levels.
/// `exclude` cells are skipped as if blocklisted (cells in flight).
std::optional<CellKey> select_cell(ExplorationState& state, const std::set<CellKey>& exclude = {});

/// Applies a generation result to the state and returns the record. A level
/// whose recomputed metrics fall outside the targeted cell is an encoder bug
/// and throws.
AttemptRecord apply_attempt(ExplorationState& state, const CellKey& cell, TemplateKind kind,
                            std::uint64_t seed, GenerationResult result, const TileCatalog& catalog);

AttemptRecord run_attempt(ExplorationState& state, const CellKey& cell, TemplateKind kind,
                          const Generator& generator, const TileCatalog& catalog);

struct ExploreOptions {
    TemplateKind template_kind = TemplateKind::nbr_plus;
    int workers = 1;
    std::optional<std::size_t> max_attempts;
    std::function<void(const AttemptRecord&)> on_record;  // called in log order
};

/// select_cell -> run_attempt until the budget, the attempt cap or the cells
/// run out.
std::vector<AttemptRecord> explore(ExplorationState& state, const Generator& generator,
                                   const TileCatalog& catalog, const ExploreOptions& options);

/// Pattern-only generation with distinct seeds derived from `seed`.
std::vector<AttemptRecord> random_baseline(std::size_t attempts, const Generator& generator,
                                           const TileCatalog& catalog, const AxesSpec& axes,
                                           TemplateKind kind, std::uint64_t seed, double attempt_timeout,
                                           const std::function<void(const AttemptRecord&)>& on_record = {});

/// Distinct cells holding at least one successfully generated level.
std::set<CellKey> coverage(const std::vector<AttemptRecord>& log, const AxesSpec& axes);

/// Solver-backed generator for width x height levels.
class SatGenerator {
public:
    SatGenerator(RuleSet rules, TileCatalog catalog, int width, int height, AxesSpec axes,
                 std::string external_command = {});

    GenerationResult operator()(std::optional<CellKey> cell, std::uint64_t seed, double timeout) const;

private:
    RuleSet rules_;
    TileCatalog catalog_;
    int width_;
    int height_;
    AxesSpec axes_;
    std::string external_command_;
};

std::string record_to_json(const AttemptRecord& record, const TileCatalog& catalog,
                           const AxesSpec& axes, std::string_view mode);
AttemptRecord record_from_json(std::string_view line, const TileCatalog& catalog);

/// Reads a JSON-lines attempt log.
std::vector<AttemptRecord> read_log(const std::string& path, const TileCatalog& catalog);

}  // namespace erx

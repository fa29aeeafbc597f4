#pragma once

#include "erx/corpus.hpp"
#include "erx/explorer.hpp"
#include "erx/metrics.hpp"
#include "erx/pathfind.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace erx {

/// Attempt statistics for one template. Means over empty sets are absent.
struct AttemptStats {
    std::size_t total = 0;
    std::size_t successful = 0;
    std::size_t failed = 0;
    std::size_t timed_out = 0;
    std::optional<double> mean_solve_time;  // successes
    std::optional<double> mean_fail_time;   // failures (UNSAT)
    std::optional<double> mean_time;        // every attempt, timeouts included
};

AttemptStats attempt_table(const std::vector<AttemptRecord>& log);

struct Histogram {
    std::map<CellKey, int> counts;  // every cell of the axes
    int out_of_range = 0;

    int total() const;
};

Histogram histogram(const std::vector<TileGrid>& levels, const TileCatalog& catalog, const AxesSpec& axes);

enum class Origin { initial, generated };
const char* origin_name(Origin o);

struct InterestRow {
    int density = 0;
    int difficulty = 0;
    int raw = 0;
    double normalized = 0.0;
    Origin origin = Origin::initial;
};

/// Pathfinding + metrics per level; normalization over the whole input set.
std::vector<InterestRow> interestingness_table(const std::vector<TileGrid>& levels,
                                               const std::vector<Origin>& origins,
                                               const TileCatalog& catalog, const PhysicsSpec& physics);

/// Per-position tile occurrence fractions over a level set.
struct TileFrequencyGrid {
    int width = 0;
    int height = 0;
    std::vector<std::map<TileId, double>> cells;  // row-major

    const std::map<TileId, double>& at(int row, int col) const
    {
        return cells[static_cast<std::size_t>(row * width + col)];
    }
};

TileFrequencyGrid tile_frequency(const std::vector<TileGrid>& levels);

// CSV writers. Headers:
//   attempts.csv        template,total_attempts,successful_attempts,failed_attempts,timed_out_attempts,
//                       average_solve_time_s,average_fail_time_s,average_time_s
//   histogram.csv       density_bin,difficulty_bin,count,origin   (bin -1,-1 = out-of-range tally)
//   interestingness.csv density,difficulty,norm_interest,origin
//   tilefreq.csv        row,col,tile_char,fraction
std::string attempts_csv(const std::vector<std::pair<std::string, AttemptStats>>& rows);
std::string histogram_csv(const std::vector<std::pair<Origin, Histogram>>& parts);
std::string interestingness_csv(const std::vector<InterestRow>& rows);
std::string tilefreq_csv(const TileFrequencyGrid& freq, const TileCatalog& catalog);

}  // namespace erx

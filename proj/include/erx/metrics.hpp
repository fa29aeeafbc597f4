#pragma once

#include "erx/corpus.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace erx {

struct PathResult;

/// One expressive-range cell.
struct CellKey {
    int density_bin = 0;
    int difficulty_bin = 0;

    friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

/// Inclusive count bounds for one metric.
struct CountRange {
    int lo = 0;
    int hi = 0;

    bool contains(int v) const { return v >= lo && v <= hi; }
    friend bool operator==(const CountRange&, const CountRange&) = default;
};

/// Binning of the density x difficulty plane. Bins are lower-inclusive and
/// upper-exclusive: [min + k*width, min + (k+1)*width).
struct AxesSpec {
    int density_min = 0;
    int density_max = 150;
    int density_bin_width = 15;
    int difficulty_min = 0;
    int difficulty_max = 24;
    int difficulty_bin_width = 3;

    /// Throws Error unless widths >= 1, max > min and each range splits into whole bins.
    void validate() const;

    int density_bins() const { return (density_max - density_min) / density_bin_width; }
    int difficulty_bins() const { return (difficulty_max - difficulty_min) / difficulty_bin_width; }

    /// Tile-count bounds a level must satisfy to land in `cell`.
    CountRange density_range(const CellKey& cell) const;
    CountRange difficulty_range(const CellKey& cell) const;

    /// "density = (60-75), difficulty = (12-15)"
    std::string describe(const CellKey& cell) const;

    std::vector<CellKey> all_cells() const;
};

int density(const TileGrid& segment, const TileCatalog& catalog);

/// Enemy or hazard tiles anywhere, plus gap tiles (background in the bottom row).
int difficulty(const TileGrid& segment, const TileCatalog& catalog);

/// Tiles counted toward difficulty at `row` of a grid with `height` rows.
bool counts_toward_difficulty(TileId tile, int row, int height, const TileCatalog& catalog);

std::optional<CellKey> bin_cell(int density_value, int difficulty_value, const AxesSpec& axes);

/// Path length plus jump count; 0 for unplayable results.
int interestingness_raw(const PathResult& path);

/// Min-max normalization to [0, 1]; a constant list maps to all zeros.
std::vector<double> normalize(const std::vector<double>& values);

}  // namespace erx

#include "erx/metrics.hpp"

#include "erx/pathfind.hpp"

#include <algorithm>

namespace erx {

void AxesSpec::validate() const
{
    if (density_bin_width < 1 || difficulty_bin_width < 1)
        throw Error("axes: bin widths must be >= 1");
    if (density_max <= density_min || difficulty_max <= difficulty_min)
        throw Error("axes: max must exceed min");
    if ((density_max - density_min) % density_bin_width != 0
        || (difficulty_max - difficulty_min) % difficulty_bin_width != 0)
        throw Error("axes: ranges must divide into whole bins");
}

CountRange AxesSpec::density_range(const CellKey& cell) const
{
    int lo = density_min + cell.density_bin * density_bin_width;
    return {lo, lo + density_bin_width - 1};
}

CountRange AxesSpec::difficulty_range(const CellKey& cell) const
{
    int lo = difficulty_min + cell.difficulty_bin * difficulty_bin_width;
    return {lo, lo + difficulty_bin_width - 1};
}

std::string AxesSpec::describe(const CellKey& cell) const
{
    auto d = density_range(cell);
    auto h = difficulty_range(cell);
    return "density = (" + std::to_string(d.lo) + "-" + std::to_string(d.hi + 1)
         + "), difficulty = (" + std::to_string(h.lo) + "-" + std::to_string(h.hi + 1) + ")";
}

std::vector<CellKey> AxesSpec::all_cells() const
{
    std::vector<CellKey> cells;
    for (int d = 0; d < density_bins(); ++d)
        for (int h = 0; h < difficulty_bins(); ++h)
            cells.push_back({d, h});
    return cells;
}

int density(const TileGrid& segment, const TileCatalog& catalog)
{
    return static_cast<int>(std::count_if(segment.cells().begin(), segment.cells().end(), [&](TileId t) {
        return !catalog.has(t, Category::background);
    }));
}

bool counts_toward_difficulty(TileId tile, int row, int height, const TileCatalog& catalog)
{
    if (catalog.has(tile, Category::enemy) || catalog.has(tile, Category::hazard))
        return true;
    return row == height - 1 && catalog.has(tile, Category::background);
}

int difficulty(const TileGrid& segment, const TileCatalog& catalog)
{
    int n = 0;
    for (int r = 0; r < segment.height(); ++r)
        for (int c = 0; c < segment.width(); ++c)
            n += counts_toward_difficulty(segment.at(r, c), r, segment.height(), catalog) ? 1 : 0;
    return n;
}

std::optional<CellKey> bin_cell(int density_value, int difficulty_value, const AxesSpec& axes)
{
    if (density_value < axes.density_min || density_value >= axes.density_max)
        return std::nullopt;
    if (difficulty_value < axes.difficulty_min || difficulty_value >= axes.difficulty_max)
        return std::nullopt;
    return CellKey{(density_value - axes.density_min) / axes.density_bin_width,
                   (difficulty_value - axes.difficulty_min) / axes.difficulty_bin_width};
}

int interestingness_raw(const PathResult& path)
{
    if (!path.playable)
        return 0;
    return path.length + path.jumps;
}

std::vector<double> normalize(const std::vector<double>& values)
{
    if (values.empty())
        throw Error("normalize: empty list");
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> out(values.size(), 0.0);
    if (hi == lo)
        return out;
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = (values[i] - lo) / (hi - lo);
    return out;
}

}  // namespace erx

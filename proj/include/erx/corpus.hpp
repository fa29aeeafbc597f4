#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace erx {

/// Raised for malformed inputs anywhere in the pipeline.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using TileId = std::uint16_t;

enum class Category : std::uint8_t {
    background = 1u << 0,
    solid = 1u << 1,
    enemy = 1u << 2,
    hazard = 1u << 3,
    passable = 1u << 4,
};

using CategorySet = std::uint8_t;

constexpr CategorySet operator|(Category a, Category b)
{
    return static_cast<CategorySet>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}

std::string_view category_name(Category c);

/// Maps tile characters to ids and semantic categories.
///
/// Ids are contiguous from 0 in declaration order. `boundary()` is one past the
/// last id and only ever stands for out-of-grid padding.
class TileCatalog {
public:
    TileCatalog() = default;

    /// Appends a tile; throws on a duplicate character or empty category set.
    TileId add(char symbol, CategorySet categories);

    std::size_t size() const { return symbols_.size(); }
    TileId boundary() const { return static_cast<TileId>(symbols_.size()); }

    char symbol(TileId id) const { return symbols_.at(id); }
    CategorySet categories(TileId id) const { return categories_.at(id); }
    bool has(TileId id, Category c) const
    {
        return (categories_.at(id) & static_cast<CategorySet>(c)) != 0;
    }

    /// Returns the id for `symbol`, or boundary() when absent.
    TileId find(char symbol) const;
    bool contains(char symbol) const { return find(symbol) != boundary(); }

    /// Ids whose tile carries category `c`, ascending.
    std::vector<TileId> ids_with(Category c) const;

    /// The catalog symbols concatenated in id order.
    std::string symbols() const { return std::string(symbols_.begin(), symbols_.end()); }

private:
    std::vector<char> symbols_;
    std::vector<CategorySet> categories_;
};

/// Parses the line-oriented catalog format: `<char> = <cat>[, <cat>...]`.
/// Lines starting with '#' that are not entries, and blank lines, are ignored.
TileCatalog load_catalog(std::string_view config_text);
TileCatalog load_catalog_file(const std::string& path);

/// Row-major W x H grid of tile ids.
class TileGrid {
public:
    TileGrid() = default;
    TileGrid(int width, int height, TileId fill = 0);
    TileGrid(int width, int height, std::vector<TileId> cells);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return cells_.size(); }

    bool in_bounds(int row, int col) const
    {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }

    TileId at(int row, int col) const { return cells_[index(row, col)]; }
    TileId& at(int row, int col) { return cells_[index(row, col)]; }

    /// Reads (row, col), substituting `outside` for out-of-grid coordinates.
    TileId at_or(int row, int col, TileId outside) const
    {
        return in_bounds(row, col) ? at(row, col) : outside;
    }

    std::size_t index(int row, int col) const
    {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_)
             + static_cast<std::size_t>(col);
    }

    const std::vector<TileId>& cells() const { return cells_; }

    /// Copy of columns [col, col + w).
    TileGrid crop_columns(int col, int w) const;

    /// Left-right reflection.
    TileGrid mirrored() const;

    friend bool operator==(const TileGrid&, const TileGrid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<TileId> cells_;
};

TileGrid parse_level(std::string_view text, const TileCatalog& catalog);
std::string render_level(const TileGrid& grid, const TileCatalog& catalog);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

/// Horizontal sliding windows, left to right. Window height must equal the
/// level height.
std::vector<TileGrid> slide_windows(const TileGrid& level, int window_w, int window_h,
                                    int stride);

struct SegmentSource {
    std::string level;
    int start_col = 0;
};

struct LevelText {
    std::string name;
    std::string text;
};

struct Corpus {
    std::vector<TileGrid> segments;
    std::vector<SegmentSource> provenance;
    TileCatalog catalog;

    bool empty() const { return segments.empty(); }
    std::size_t size() const { return segments.size(); }
};

Corpus build_corpus(const std::vector<LevelText>& levels, const TileCatalog& catalog,
                    int window_w, int window_h, int stride);

/// Loads every `*.txt` file in `dir` (sorted by file name) as a level.
std::vector<LevelText> read_level_dir(const std::string& dir);

/// Corpus archive: a header line followed by `> <level> <start>` blocks.
std::string serialize_corpus(const Corpus& corpus);
Corpus deserialize_corpus(std::string_view text, const TileCatalog& catalog);

}  // namespace erx

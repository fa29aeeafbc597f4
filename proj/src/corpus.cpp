#include "erx/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace erx {

namespace {

constexpr std::array<Category, 5> kAllCategories = {
    Category::background, Category::solid, Category::enemy, Category::hazard,
    Category::passable};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        auto line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }
    return lines;
}

std::string describe_char(char c)
{
    std::ostringstream os;
    if (std::isprint(static_cast<unsigned char>(c)))
        os << '\'' << c << '\'';
    else
        os << "byte 0x" << std::hex << (static_cast<unsigned>(c) & 0xffu);
    return os.str();
}

}  // namespace

std::string_view category_name(Category c)
{
    switch (c) {
    case Category::background: return "background";
    case Category::solid: return "solid";
    case Category::enemy: return "enemy";
    case Category::hazard: return "hazard";
    case Category::passable: return "passable";
    }
    return "?";
}

TileId TileCatalog::add(char symbol, CategorySet categories)
{
    if (std::isspace(static_cast<unsigned char>(symbol)))
        throw Error("catalog: whitespace cannot be a tile character");
    if (contains(symbol))
        throw Error("catalog: duplicate character " + describe_char(symbol));
    if (categories == 0)
        throw Error("catalog: empty category list for " + describe_char(symbol));
    symbols_.push_back(symbol);
    categories_.push_back(categories);
    return static_cast<TileId>(symbols_.size() - 1);
}

TileId TileCatalog::find(char symbol) const
{
    auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
    return static_cast<TileId>(it - symbols_.begin());
}

std::vector<TileId> TileCatalog::ids_with(Category c) const
{
    std::vector<TileId> ids;
    for (TileId id = 0; id < boundary(); ++id)
        if (has(id, c))
            ids.push_back(id);
    return ids;
}

TileCatalog load_catalog(std::string_view config_text)
{
    TileCatalog catalog;
    int line_no = 0;
    for (auto raw : split_lines(config_text)) {
        ++line_no;
        auto line = trim(raw);
        if (line.empty())
            continue;
        // An entry is a single non-space character followed by '='.
        auto rest = trim(line.substr(1));
        if (rest.empty() || rest.front() != '=') {
            if (line.front() == '#')
                continue;
            throw Error("catalog line " + std::to_string(line_no) + ": expected '<char> = <categories>'");
        }
        char symbol = line.front();
        rest.remove_prefix(1);
        CategorySet cats = 0;
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            auto comma = rest.find(',', pos);
            if (comma == std::string_view::npos)
                comma = rest.size();
            auto name = trim(rest.substr(pos, comma - pos));
            pos = comma + 1;
            if (name.empty())
                continue;
            auto it = std::find_if(kAllCategories.begin(), kAllCategories.end(),
                                   [&](Category c) { return category_name(c) == name; });
            if (it == kAllCategories.end())
                throw Error("catalog line " + std::to_string(line_no) + ": unknown category '"
                            + std::string(name) + "'");
            cats |= static_cast<CategorySet>(*it);
        }
        try {
            catalog.add(symbol, cats);
        } catch (const Error& e) {
            throw Error("catalog line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (catalog.ids_with(Category::background).empty())
        throw Error("catalog: no tile has category background");
    return catalog;
}

TileCatalog load_catalog_file(const std::string& path)
{
    return load_catalog(read_text_file(path));
}

TileGrid::TileGrid(int width, int height, TileId fill)
    : TileGrid(width, height,
               std::vector<TileId>(static_cast<std::size_t>(std::max(width, 0))
                                       * static_cast<std::size_t>(std::max(height, 0)),
                                   fill))
{
}

TileGrid::TileGrid(int width, int height, std::vector<TileId> cells)
    : width_(width), height_(height), cells_(std::move(cells))
{
    if (width < 1 || height < 1)
        throw Error("grid dimensions must be positive");
    if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw Error("grid cell count does not match dimensions");
}

TileGrid TileGrid::crop_columns(int col, int w) const
{
    TileGrid out(w, height_);
    for (int r = 0; r < height_; ++r)
        for (int c = 0; c < w; ++c)
            out.at(r, c) = at(r, col + c);
    return out;
}

TileGrid TileGrid::mirrored() const
{
    TileGrid out(width_, height_);
    for (int r = 0; r < height_; ++r)
        for (int c = 0; c < width_; ++c)
            out.at(r, c) = at(r, width_ - 1 - c);
    return out;
}

TileGrid parse_level(std::string_view text, const TileCatalog& catalog)
{
    auto lines = split_lines(text);
    while (!lines.empty() && lines.back().empty())
        lines.pop_back();
    if (lines.empty())
        throw Error("level: empty input");
    const auto width = lines.front().size();
    if (width == 0)
        throw Error("level: empty first row");
    std::vector<TileId> cells;
    cells.reserve(width * lines.size());
    for (std::size_t r = 0; r < lines.size(); ++r) {
        if (lines[r].size() != width)
            throw Error("level: ragged rows (row " + std::to_string(r) + " has "
                        + std::to_string(lines[r].size()) + " columns, expected "
                        + std::to_string(width) + ")");
        for (std::size_t c = 0; c < width; ++c) {
            TileId id = catalog.find(lines[r][c]);
            if (id == catalog.boundary())
                throw Error("level: character " + describe_char(lines[r][c])
                            + " not in catalog at row " + std::to_string(r) + ", column "
                            + std::to_string(c));
            cells.push_back(id);
        }
    }
    return TileGrid(static_cast<int>(width), static_cast<int>(lines.size()), std::move(cells));
}

std::string render_level(const TileGrid& grid, const TileCatalog& catalog)
{
    std::string out;
    out.reserve((grid.width() + 1) * grid.height());
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c)
            out.push_back(catalog.symbol(grid.at(r, c)));
        out.push_back('\n');
    }
    return out;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text)
{
    std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << text;
}

std::vector<TileGrid> slide_windows(const TileGrid& level, int window_w, int window_h, int stride)
{
    if (stride < 1)
        throw Error("window: stride must be >= 1");
    if (window_w < 1)
        throw Error("window: width must be >= 1");
    if (window_h != level.height())
        throw Error("window: height " + std::to_string(window_h) + " does not match level height "
                    + std::to_string(level.height()));
    if (window_w > level.width())
        throw Error("window: width " + std::to_string(window_w) + " exceeds level width "
                    + std::to_string(level.width()));
    std::vector<TileGrid> out;
    for (int start = 0; start + window_w <= level.width(); start += stride)
        out.push_back(level.crop_columns(start, window_w));
    return out;
}

Corpus build_corpus(const std::vector<LevelText>& levels, const TileCatalog& catalog,
                    int window_w, int window_h, int stride)
{
    if (levels.empty())
        throw Error("corpus: no levels");
    Corpus corpus;
    corpus.catalog = catalog;
    for (const auto& level : levels) {
        try {
            auto grid = parse_level(level.text, catalog);
            auto windows = slide_windows(grid, window_w, window_h, stride);
            for (std::size_t k = 0; k < windows.size(); ++k) {
                corpus.segments.push_back(std::move(windows[k]));
                corpus.provenance.push_back({level.name, static_cast<int>(k) * stride});
            }
        } catch (const Error& e) {
            throw Error(level.name + ": " + e.what());
        }
    }
    return corpus;
}

std::vector<LevelText> read_level_dir(const std::string& dir)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw Error("levels directory '" + dir + "' does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<LevelText> levels;
    for (const auto& f : files)
        levels.push_back({f.stem().string(), read_text_file(f.string())});
    return levels;
}

std::string serialize_corpus(const Corpus& corpus)
{
    std::ostringstream os;
    int w = corpus.empty() ? 0 : corpus.segments.front().width();
    int h = corpus.empty() ? 0 : corpus.segments.front().height();
    os << "erx-corpus 1 " << corpus.size() << ' ' << w << ' ' << h << '\n';
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        os << "> " << corpus.provenance[i].level << ' ' << corpus.provenance[i].start_col << '\n';
        os << render_level(corpus.segments[i], corpus.catalog);
    }
    return os.str();
}

Corpus deserialize_corpus(std::string_view text, const TileCatalog& catalog)
{
    auto lines = split_lines(text);
    if (lines.empty())
        throw Error("corpus archive: empty");
    std::istringstream header{std::string(lines.front())};
    std::string magic;
    int version = 0, w = 0, h = 0;
    std::size_t count = 0;
    if (!(header >> magic >> version >> count >> w >> h) || magic != "erx-corpus" || version != 1)
        throw Error("corpus archive: bad header");
    Corpus corpus;
    corpus.catalog = catalog;
    std::size_t i = 1;
    while (i < lines.size()) {
        if (lines[i].empty()) {
            ++i;
            continue;
        }
        if (lines[i].substr(0, 2) != "> ")
            throw Error("corpus archive: expected segment header at line " + std::to_string(i + 1));
        std::istringstream sh{std::string(lines[i].substr(2))};
        SegmentSource src;
        if (!(sh >> src.level >> src.start_col))
            throw Error("corpus archive: bad segment header at line " + std::to_string(i + 1));
        if (i + static_cast<std::size_t>(h) >= lines.size())
            throw Error("corpus archive: truncated segment at line " + std::to_string(i + 1));
        std::string body;
        for (int r = 1; r <= h; ++r) {
            body.append(lines[i + r]);
            body.push_back('\n');
        }
        auto grid = parse_level(body, catalog);
        if (grid.width() != w || grid.height() != h)
            throw Error("corpus archive: segment size mismatch at line " + std::to_string(i + 1));
        corpus.segments.push_back(std::move(grid));
        corpus.provenance.push_back(std::move(src));
        i += static_cast<std::size_t>(h) + 1;
    }
    if (corpus.size() != count)
        throw Error("corpus archive: header promises " + std::to_string(count) + " segments, found "
                    + std::to_string(corpus.size()));
    return corpus;
}

}  // namespace erx

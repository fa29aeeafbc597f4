#include "oracles.hpp"
#include "test_util.hpp"

#include "erx/corpus.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace erx;

TEST_CASE("catalog file parses into the expected categories")
{
    auto cat = load_catalog_file(test_data("config/smb.catalog"));
    CHECK(cat.size() == 11);
    CHECK(cat.symbols() == oracle::smb_catalog().symbols());
    CHECK(cat.has(cat.find('-'), Category::background));
    CHECK(cat.has(cat.find('-'), Category::passable));
    CHECK(cat.has(cat.find('E'), Category::enemy));
    CHECK(cat.has(cat.find('E'), Category::passable));
    CHECK_FALSE(cat.has(cat.find('o'), Category::background));
    CHECK(cat.has(cat.find('o'), Category::passable));
    for (char c : std::string("XS?Q<>[]")) {
        CHECK(cat.has(cat.find(c), Category::solid));
        CHECK_FALSE(cat.has(cat.find(c), Category::passable));
    }
    CHECK(cat.ids_with(Category::hazard).empty());
    CHECK(cat.boundary() == 11);
    CHECK_FALSE(cat.contains('Z'));
}

TEST_CASE("catalog parse errors")
{
    CHECK_THROWS_WITH_AS(load_catalog("- = background\nX = lava\n"), doctest::Contains("unknown category"), Error);
    CHECK_THROWS_WITH_AS(load_catalog("X = solid\n"), doctest::Contains("background"), Error);
    CHECK_THROWS_AS(load_catalog("- = background\n- = solid\n"), Error);
    CHECK_THROWS_AS(load_catalog("- = background\nX =\n"), Error);
    CHECK_THROWS_AS(load_catalog("nonsense\n"), Error);
    // '#' may itself be a tile when written as an entry
    auto cat = load_catalog("# comment\n- = background\n# = solid\n");
    CHECK(cat.contains('#'));
}

TEST_CASE("level parsing and rendering round-trip")
{
    auto cat = oracle::smb_catalog();
    std::string text = "--E-\n-XX-\nXXXX\n";
    auto grid = parse_level(text, cat);
    CHECK(grid.width() == 4);
    CHECK(grid.height() == 3);
    CHECK(grid.at(0, 2) == cat.find('E'));
    CHECK(render_level(grid, cat) == text);
    CHECK(parse_level("--\r\nXX\r\n", cat) == parse_level("--\nXX", cat));

    CHECK_THROWS_WITH_AS(parse_level("", cat), doctest::Contains("empty"), Error);
    CHECK_THROWS_WITH_AS(parse_level("---\n--\n", cat), doctest::Contains("ragged"), Error);
    CHECK_THROWS_WITH_AS(parse_level("--\n-Z\n", cat), doctest::Contains("row 1"), Error);
}

TEST_CASE("render then parse is the identity on random grids")
{
    auto cat = oracle::smb_catalog();
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> tile(0, static_cast<int>(cat.size()) - 1), dim(1, 12);
    for (int i = 0; i < 50; ++i) {
        TileGrid g(dim(rng), dim(rng));
        for (int r = 0; r < g.height(); ++r)
            for (int c = 0; c < g.width(); ++c)
                g.at(r, c) = static_cast<TileId>(tile(rng));
        CHECK(parse_level(render_level(g, cat), cat) == g);
    }
}

TEST_CASE("window count is width - window + 1 at stride 1")
{
    auto cat = oracle::smb_catalog();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> width(20, 120);
    for (int i = 0; i < 40; ++i) {
        int w = width(rng);
        TileGrid level(w, 14, cat.find('-'));
        CHECK(slide_windows(level, 20, 14, 1).size() == static_cast<std::size_t>(w - 19));
    }
    TileGrid level(25, 14);
    CHECK(slide_windows(level, 20, 14, 2).size() == 3);
    CHECK_THROWS_AS(slide_windows(level, 26, 14, 1), Error);
    CHECK_THROWS_AS(slide_windows(level, 20, 13, 1), Error);
    CHECK_THROWS_AS(slide_windows(level, 20, 14, 0), Error);
}

TEST_CASE("corpus segments match their source cells")
{
    auto cat = oracle::smb_catalog();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> tile(0, 10);
    std::vector<LevelText> levels;
    std::vector<TileGrid> grids;
    for (int w : {25, 30}) {
        TileGrid g(w, 14);
        for (int r = 0; r < 14; ++r)
            for (int c = 0; c < w; ++c)
                g.at(r, c) = static_cast<TileId>(tile(rng));
        grids.push_back(g);
        levels.push_back({"lvl" + std::to_string(w), render_level(g, cat)});
    }
    auto corpus = build_corpus(levels, cat, 20, 14, 1);
    REQUIRE(corpus.size() == 17);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& src = corpus.provenance[i];
        const auto& level = src.level == "lvl25" ? grids[0] : grids[1];
        for (int r = 0; r < 14; ++r)
            for (int c = 0; c < 20; ++c)
                REQUIRE(corpus.segments[i].at(r, c) == level.at(r, src.start_col + c));
    }

    auto back = deserialize_corpus(serialize_corpus(corpus), cat);
    CHECK(back.segments == corpus.segments);
    CHECK(back.size() == 17);

    CHECK_THROWS_WITH_AS(build_corpus({}, cat, 20, 14, 1), doctest::Contains("no levels"), Error);
    CHECK_THROWS_WITH_AS(build_corpus({{"short", render_level(TileGrid(10, 14), cat)}}, cat, 20, 14, 1),
                         doctest::Contains("short"), Error);
}

TEST_CASE("bundled SMB level data")
{
    auto cat = load_catalog_file(test_data("config/smb.catalog"));
    auto levels = read_level_dir(test_data("data/smb"));
    REQUIRE_FALSE(levels.empty());
    auto corpus = build_corpus(levels, cat, 20, 14, 1);
    std::size_t expected = 0;
    for (const auto& l : levels)
        expected += static_cast<std::size_t>(parse_level(l.text, cat).width() - 19);
    CHECK(corpus.size() == expected);
    std::set<TileId> used;
    for (const auto& s : corpus.segments)
        used.insert(s.cells().begin(), s.cells().end());
    CHECK(used.size() == 11);
}

TEST_CASE("mirrored and cropped grids")
{
    TileGrid g(3, 2, std::vector<TileId>{0, 1, 2, 3, 4, 5});
    CHECK(g.mirrored() == TileGrid(3, 2, std::vector<TileId>{2, 1, 0, 5, 4, 3}));
    CHECK(g.crop_columns(1, 2) == TileGrid(2, 2, std::vector<TileId>{1, 2, 4, 5}));
    CHECK(g.at_or(-1, 0, 99) == 99);
    CHECK_THROWS_AS(TileGrid(2, 2, std::vector<TileId>{1, 2, 3}), Error);
}

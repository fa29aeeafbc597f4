#include "oracles.hpp"

#include "erx/encoder.hpp"
#include "erx/metrics.hpp"
#include "erx/solver.hpp"

#include <doctest.h>

#include <bit>
#include <random>

using namespace erx;

namespace {

// Does the instance have a model agreeing with `fixed` on variables 1..fixed.size()?
bool extends(const CnfInstance& cnf, const std::vector<bool>& fixed)
{
    std::vector<int> assign(static_cast<std::size_t>(cnf.var_count()) + 1, 0);
    for (std::size_t i = 0; i < fixed.size(); ++i)
        assign[i + 1] = fixed[i] ? 1 : -1;
    return oracle::dpll(oracle::clauses_of(cnf), assign);
}

TileCatalog tiny_catalog(int tiles)
{
    TileCatalog cat;
    cat.add('-', Category::background | Category::passable);
    if (tiles > 1)
        cat.add('X', static_cast<CategorySet>(Category::solid));
    if (tiles > 2)
        cat.add('E', Category::enemy | Category::passable);
    return cat;
}

std::vector<bool> one_hot(const TileGrid& g, int tiles)
{
    std::vector<bool> bits(g.size() * static_cast<std::size_t>(tiles), false);
    for (std::size_t i = 0; i < g.size(); ++i)
        bits[i * static_cast<std::size_t>(tiles) + g.cells()[i]] = true;
    return bits;
}

TileGrid grid_from_index(int w, int h, int tiles, int index)
{
    TileGrid g(w, h);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.at(static_cast<int>(i) / w, static_cast<int>(i) % w) = static_cast<TileId>(index % tiles);
        index /= tiles;
    }
    return g;
}

}  // namespace

TEST_CASE("exactly-one clause counts and models")
{
    for (int k = 1; k <= 11; ++k) {
        CnfInstance cnf(k);
        std::vector<Lit> vars;
        for (int v = 1; v <= k; ++v)
            vars.push_back(v);
        encode_exactly_one(cnf, vars);
        CHECK(cnf.clause_count() == static_cast<std::size_t>(1 + k * (k - 1) / 2));
        if (k <= 8) {
            auto models = oracle::projected_models(cnf, k);
            std::set<std::uint64_t> expected;
            for (int v = 0; v < k; ++v)
                expected.insert(std::uint64_t{1} << v);
            CHECK(models == expected);
        }
    }
    CnfInstance cnf(3);
    CHECK_THROWS_AS(encode_exactly_one(cnf, std::vector<Lit>{}), Error);
}

TEST_CASE("cardinality projection is exact for n <= 8")
{
    for (int n = 0; n <= 8; ++n)
        for (int lo = 0; lo <= n; ++lo)
            for (int hi = lo; hi <= n; ++hi) {
                CnfInstance cnf(n);
                std::vector<Lit> ind;
                for (int v = 1; v <= n; ++v)
                    ind.push_back(v);
                encode_cardinality(cnf, ind, lo, hi);
                for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
                    std::vector<bool> fixed;
                    for (int v = 0; v < n; ++v)
                        fixed.push_back((bits >> v) & 1u);
                    int pop = std::popcount(bits);
                    REQUIRE(extends(cnf, fixed) == (pop >= lo && pop <= hi));
                }
            }
}

TEST_CASE("cardinality examples and errors")
{
    CnfInstance cnf(3);
    std::vector<Lit> ind{1, 2, 3};
    encode_cardinality(cnf, ind, 1, 2);
    std::set<std::uint64_t> expected{1, 2, 4, 3, 5, 6};
    CHECK(oracle::projected_models(cnf, 3) == expected);

    CnfInstance vacuous(5);
    std::vector<Lit> five{1, 2, 3, 4, 5};
    encode_cardinality(vacuous, five, 0, 5);
    CHECK(vacuous.clause_count() == 0);

    CnfInstance all(4);
    std::vector<Lit> four{1, 2, 3, 4};
    encode_cardinality(all, four, 4, 4);
    CHECK(oracle::projected_models(all, 4) == std::set<std::uint64_t>{15});

    CnfInstance bad(2);
    std::vector<Lit> two{1, 2};
    CHECK_THROWS_AS(encode_cardinality(bad, two, 2, 1), Error);
    CHECK_THROWS_AS(encode_cardinality(bad, two, 0, 3), Error);
    CHECK_THROWS_AS(encode_cardinality(bad, two, -1, 1), Error);
}

TEST_CASE("cardinality over negated literals")
{
    CnfInstance cnf(4);
    std::vector<Lit> ind{-1, -2, 3, -4};
    encode_cardinality(cnf, ind, 2, 3);
    for (std::uint64_t bits = 0; bits < 16; ++bits) {
        std::vector<bool> fixed;
        for (int v = 0; v < 4; ++v)
            fixed.push_back((bits >> v) & 1u);
        int count = !fixed[0] + !fixed[1] + fixed[2] + !fixed[3];
        CHECK(extends(cnf, fixed) == (count >= 2 && count <= 3));
    }
}

TEST_CASE("pattern encoding on small grids")
{
    TileCatalog cat;
    cat.add('A', Category::background | Category::passable);
    cat.add('B', static_cast<CategorySet>(Category::solid));

    SUBCASE("1x1 grid with only boundary neighbours")
    {
        auto rules = extract_rules({TileGrid(1, 1, TileId{0})}, cat, TemplateKind::nbr_plus);
        auto cnf = encode_task(1, 1, rules, cat, std::nullopt, std::nullopt);
        CHECK(extends(cnf, {true, false}));
        CHECK_FALSE(extends(cnf, {false, true}));  // B was never seen, so it is forbidden
    }
    SUBCASE("2x1 grid, A must have B to the east")
    {
        auto rules = extract_rules({TileGrid(2, 1, std::vector<TileId>{0, 1})}, cat, TemplateKind::nbr_plus);
        auto cnf = encode_task(2, 1, rules, cat, std::nullopt, std::nullopt);
        CHECK(extends(cnf, {true, false, false, true}));    // [A,B]
        CHECK_FALSE(extends(cnf, {true, false, true, false}));  // [A,A]
        CHECK_FALSE(extends(cnf, {false, true, true, false}));  // [B,A]
    }
    SUBCASE("3x3 ring from an all-background example has one model")
    {
        auto rules = extract_rules({TileGrid(4, 4, TileId{0})}, cat, TemplateKind::ring);
        auto cnf = encode_task(3, 3, rules, cat, std::nullopt, std::nullopt);
        int models = 0;
        for (int i = 0; i < 512; ++i) {
            auto g = grid_from_index(3, 3, 2, i);
            if (extends(cnf, one_hot(g, 2))) {
                ++models;
                CHECK(g == TileGrid(3, 3, TileId{0}));
            }
        }
        CHECK(models == 1);
    }
}

TEST_CASE("encode_task models equal brute-force grid enumeration")
{
    std::mt19937_64 rng(41);
    for (int tiles : {2, 3}) {
        auto cat = tiny_catalog(tiles);
        std::uniform_int_distribution<int> tile(0, tiles - 1);
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<TileGrid> corpus;
            for (int i = 0; i < 2; ++i) {
                TileGrid g(4, 3);
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 4; ++c)
                        g.at(r, c) = static_cast<TileId>(tile(rng));
                corpus.push_back(g);
            }
            const int w = tiles == 2 ? 3 : 2, h = 3;
            int total = 1;
            for (int i = 0; i < w * h; ++i)
                total *= tiles;
            for (auto kind : kAllTemplates) {
                auto rules = extract_rules(corpus, cat, kind);
                std::uniform_int_distribution<int> bound(0, w * h);
                int a = bound(rng), b = bound(rng);
                CountRange dens{std::min(a, b), std::max(a, b)};
                CountRange diff{0, 2};
                auto cnf = encode_task(w, h, rules, cat, dens, diff);
                auto plain = encode_task(w, h, rules, cat, std::nullopt, std::nullopt);
                for (int i = 0; i < total; ++i) {
                    auto g = grid_from_index(w, h, tiles, i);
                    bool valid = oracle::valid_against(g, corpus, kind, cat.boundary());
                    bool in_bounds = dens.contains(density(g, cat)) && diff.contains(difficulty(g, cat));
                    REQUIRE(extends(cnf, one_hot(g, tiles)) == (valid && in_bounds));
                    REQUIRE(extends(plain, one_hot(g, tiles)) == valid);
                }
            }
        }
    }
}

TEST_CASE("2x2 density exactly 2")
{
    auto cat = tiny_catalog(2);
    std::vector<TileGrid> corpus;
    for (int i = 0; i < 16; ++i)
        corpus.push_back(grid_from_index(2, 2, 2, i));
    auto rules = extract_rules(corpus, cat, TemplateKind::nbr_plus);
    auto cnf = encode_task(2, 2, rules, cat, CountRange{2, 2}, std::nullopt);
    int models = 0;
    for (int i = 0; i < 16; ++i) {
        auto g = grid_from_index(2, 2, 2, i);
        bool ok = extends(cnf, one_hot(g, 2));
        CHECK(ok == (density(g, cat) == 2));
        models += ok;
    }
    CHECK(models == 6);
}

TEST_CASE("bounds for the (60-75)x(12-15) cell")
{
    AxesSpec axes;
    CellKey cell{4, 4};
    CHECK(axes.density_range(cell) == CountRange{60, 74});
    CHECK(axes.difficulty_range(cell) == CountRange{12, 14});
}

TEST_CASE("infeasible bounds give a flagged unsatisfiable instance")
{
    auto cat = tiny_catalog(2);
    auto rules = extract_rules({TileGrid(3, 3, TileId{0})}, cat, TemplateKind::nbr_plus);
    auto cnf = encode_task(2, 2, rules, cat, CountRange{5, 9}, std::nullopt);
    CHECK(cnf.trivially_unsat);
    CHECK(solve(cnf, 1).status == SolveStatus::unsat);
    auto ok = encode_task(2, 2, rules, cat, CountRange{0, 4}, std::nullopt);
    CHECK_FALSE(ok.trivially_unsat);
}

TEST_CASE("encoding errors")
{
    auto cat = tiny_catalog(2);
    auto rules = extract_rules({TileGrid(3, 3, TileId{0})}, cat, TemplateKind::block2);
    auto other = tiny_catalog(3);
    CHECK_THROWS_AS(encode_task(2, 2, rules, other, std::nullopt, std::nullopt), Error);
    auto broken = rules;
    broken.kind = TemplateKind::ring;
    CnfInstance cnf(2, 2, 2);
    CHECK_THROWS_AS(encode_patterns(cnf, broken), Error);
    CnfInstance flat(4);
    CHECK_THROWS_AS(encode_patterns(flat, rules), Error);
    CHECK_THROWS_AS(flat.add_clause({5}), Error);
    CHECK_THROWS_AS(flat.add_clause(std::span<const Lit>{}), Error);
}

TEST_CASE("decode")
{
    CnfInstance one(1, 1, 1);
    CHECK(decode(Model{true}, one) == TileGrid(1, 1, TileId{0}));

    CnfInstance cnf(2, 2, 3);
    Model m(12, false);
    m[0 * 3 + 2] = m[1 * 3 + 0] = m[2 * 3 + 1] = m[3 * 3 + 1] = true;
    CHECK(decode(m, cnf) == TileGrid(2, 2, std::vector<TileId>{2, 0, 1, 1}));
    m[0] = true;
    CHECK_THROWS_WITH_AS(decode(m, cnf), doctest::Contains("several"), Error);
    m[0] = m[2] = false;
    CHECK_THROWS_WITH_AS(decode(m, cnf), doctest::Contains("no tile"), Error);
}

TEST_CASE("solver models decode into valid, in-bin grids")
{
    auto cat = oracle::smb_catalog();
    std::mt19937_64 rng(43);
    std::vector<TileGrid> corpus;
    std::uniform_int_distribution<int> tile(0, 10);
    for (int i = 0; i < 5; ++i) {
        TileGrid g(8, 6, cat.find('-'));
        for (int c = 0; c < 8; ++c)
            g.at(5, c) = cat.find(tile(rng) < 8 ? 'X' : '-');
        for (int k = 0; k < 6; ++k)
            g.at(std::uniform_int_distribution<int>(0, 4)(rng), std::uniform_int_distribution<int>(0, 7)(rng)) =
                static_cast<TileId>(tile(rng));
        corpus.push_back(g);
    }
    for (auto kind : kAllTemplates) {
        auto rules = extract_rules(corpus, cat, kind);
        for (int lo = 0; lo <= 12; lo += 3) {
            CountRange dens{lo, lo + 5};
            auto cnf = encode_task(8, 6, rules, cat, dens, std::nullopt);
            auto out = solve(cnf, static_cast<std::uint64_t>(lo), 20.0);
            REQUIRE(out.status != SolveStatus::timeout);
            if (out.status != SolveStatus::sat)
                continue;
            REQUIRE(verify_model(cnf, out.model));
            auto g = decode(out.model, cnf);
            CHECK(check_grid(g, rules).empty());
            CHECK(dens.contains(density(g, cat)));
        }
    }
}

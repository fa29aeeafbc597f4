#include "oracles.hpp"
#include "stub_generator.hpp"

#include "erx/explorer.hpp"
#include "erx/metrics.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace erx;

namespace {

ExplorationState fresh(const StubGenerator& stub, int threshold, double budget = 1e9, std::uint64_t seed = 1)
{
    return init_state({}, stub.catalog, stub.axes, threshold, budget, 900, seed);
}

}  // namespace

TEST_CASE("init_state seeds counts and the blocklist from the corpus")
{
    StubGenerator stub;
    auto empty = fresh(stub, 10);
    CHECK(empty.counts.size() == 25);
    CHECK(empty.blocklist.empty());
    for (const auto& [_, n] : empty.counts)
        CHECK(n == 0);

    auto level = *stub(CellKey{1, 0}, 1, 1).level;
    std::vector<TileGrid> corpus(12, level);
    corpus.push_back(TileGrid(10, 2, 0));  // density 0: out of range
    auto state = init_state(corpus, stub.catalog, stub.axes, 10, 1, 1, 1);
    CHECK(state.counts[CellKey{1, 0}] == 12);
    CHECK(state.blocklist == std::set<CellKey>{CellKey{1, 0}});
    int total = 0;
    for (const auto& [_, n] : state.counts)
        total += n;
    CHECK(total == 12);
}

TEST_CASE("select_cell picks a minimum-count eligible cell")
{
    StubGenerator stub;
    auto state = fresh(stub, 10);
    state.counts.clear();
    state.counts[{0, 0}] = 0;
    state.counts[{0, 1}] = 3;
    state.counts[{0, 2}] = 12;
    state.blocklist = {{0, 2}};
    for (int i = 0; i < 20; ++i)
        CHECK(*select_cell(state) == CellKey{0, 0});
    CHECK(*select_cell(state, {{0, 0}}) == CellKey{0, 1});

    state.blocklist = {{0, 0}, {0, 1}, {0, 2}};
    CHECK_FALSE(select_cell(state));
}

TEST_CASE("ties are broken uniformly")
{
    StubGenerator stub;
    auto state = fresh(stub, 10, 1e9, 77);
    state.counts.clear();
    state.counts[{0, 0}] = 2;
    state.counts[{0, 1}] = 2;
    int first = 0;
    for (int i = 0; i < 10000; ++i)
        first += *select_cell(state) == CellKey{0, 0};
    CHECK(first > 4800);
    CHECK(first < 5200);
}

TEST_CASE("attempt outcomes update the state")
{
    StubGenerator stub;
    auto state = fresh(stub, 2);
    CellKey cell{1, 0};
    auto rec = run_attempt(state, cell, TemplateKind::ring, std::cref(stub), stub.catalog);
    CHECK(rec.outcome == AttemptOutcome::success);
    CHECK(state.counts[cell] == 1);
    CHECK_FALSE(state.blocklist.count(cell));
    REQUIRE(rec.level);
    CHECK(bin_cell(rec.density, rec.difficulty, stub.axes) == cell);
    run_attempt(state, cell, TemplateKind::ring, std::cref(stub), stub.catalog);
    CHECK(state.counts[cell] == 2);
    CHECK(state.blocklist.count(cell));
    CHECK_THROWS_AS(run_attempt(state, cell, TemplateKind::ring, std::cref(stub), stub.catalog), Error);

    // difficulty above the top-row capacity: UNSAT, blocklisted
    CellKey impossible{0, 4};
    auto fail = run_attempt(state, impossible, TemplateKind::ring, std::cref(stub), stub.catalog);
    CHECK(fail.outcome == AttemptOutcome::failed);
    CHECK(state.blocklist.count(impossible));
    CHECK_FALSE(fail.level);

    GenerationResult timeout;
    timeout.status = SolveStatus::timeout;
    timeout.elapsed = 5;
    auto t = apply_attempt(state, CellKey{2, 2}, TemplateKind::ring, 9, timeout, stub.catalog);
    CHECK(t.outcome == AttemptOutcome::timed_out);
    CHECK(state.blocklist.count(CellKey{2, 2}));

    GenerationResult wrong;
    wrong.status = SolveStatus::sat;
    wrong.level = TileGrid(10, 2, 1);  // density 20: out of every bin
    CHECK_THROWS_WITH_AS(apply_attempt(state, CellKey{3, 3}, TemplateKind::ring, 1, wrong, stub.catalog),
                         doctest::Contains("unsound"), Error);
}

TEST_CASE("explore stops at the threshold and when cells run out")
{
    StubGenerator stub;
    auto state = fresh(stub, 2);
    state.counts.clear();
    for (int d = 0; d < 3; ++d)
        state.counts[{d, 0}] = 0;
    ExploreOptions opts;
    auto log = explore(state, std::cref(stub), stub.catalog, opts);
    CHECK(log.size() == 6);
    for (const auto& rec : log)
        CHECK(rec.outcome == AttemptOutcome::success);
    CHECK(state.blocklist.size() == 3);

    auto zero = fresh(stub, 2, 0.0);
    CHECK(explore(zero, std::cref(stub), stub.catalog, opts).empty());

    auto capped = fresh(stub, 10);
    opts.max_attempts = 7;
    CHECK(explore(capped, std::cref(stub), stub.catalog, opts).size() == 7);

    auto budget = fresh(stub, 10, 4.5);
    opts.max_attempts.reset();
    CHECK(explore(budget, std::cref(stub), stub.catalog, opts).size() == 5);
}

TEST_CASE("scheduler invariants over a long run")
{
    StubGenerator stub;
    stub.fail_rate = 0.1;
    stub.timeout_rate = 0.05;
    auto state = fresh(stub, 10, 1e9, 5);
    std::size_t successes = 0;
    ExploreOptions opts;
    opts.on_record = [&](const AttemptRecord& rec) {
        successes += rec.outcome == AttemptOutcome::success;
        if (rec.outcome != AttemptOutcome::success)
            CHECK(state.blocklist.count(*rec.cell));
    };
    // the generator sees the state as it was when the cell was chosen
    Generator checked = [&](std::optional<CellKey> cell, std::uint64_t seed, double t) {
        CHECK_FALSE(state.blocklist.count(*cell));
        int min = std::numeric_limits<int>::max();
        for (const auto& [c, n] : state.counts)
            if (!state.blocklist.count(c))
                min = std::min(min, n);
        CHECK(state.counts.at(*cell) == min);
        CHECK(state.counts.at(*cell) < state.threshold);
        return stub(cell, seed, t);
    };
    auto log = explore(state, checked, stub.catalog, opts);
    int total = 0;
    for (const auto& [_, n] : state.counts) {
        CHECK(n <= 10);
        total += n;
    }
    CHECK(static_cast<std::size_t>(total) == successes);
    CHECK(state.blocklist.size() == state.counts.size());
}

TEST_CASE("equal seeds give equal decisions")
{
    auto run = [](std::uint64_t seed) {
        StubGenerator stub;
        stub.fail_rate = 0.2;
        auto state = fresh(stub, 3, 1e9, seed);
        auto log = explore(state, std::cref(stub), stub.catalog, ExploreOptions{});
        std::vector<std::tuple<int, int, std::uint64_t, int>> out;
        for (const auto& r : log)
            out.emplace_back(r.cell->density_bin, r.cell->difficulty_bin, r.seed, static_cast<int>(r.outcome));
        return out;
    };
    CHECK(run(9) == run(9));
    CHECK(run(9) != run(10));
}

TEST_CASE("parallel workers never run the same cell twice in a batch")
{
    StubGenerator stub;
    auto state = fresh(stub, 3, 1e9, 4);
    ExploreOptions opts;
    opts.workers = 4;
    auto log = explore(state, std::cref(stub), stub.catalog, opts);
    CHECK_FALSE(log.empty());
    for (std::size_t i = 0; i < log.size(); ++i)
        CHECK(log[i].index == i);
    int total = 0;
    for (const auto& [_, n] : state.counts) {
        CHECK(n <= 3);
        total += n;
    }
    CHECK(total == std::count_if(log.begin(), log.end(),
                                 [](const AttemptRecord& r) { return r.outcome == AttemptOutcome::success; }));
}

TEST_CASE("random baseline and coverage")
{
    StubGenerator stub;
    auto log = random_baseline(1, std::cref(stub), stub.catalog, stub.axes, TemplateKind::block2, 3, 10);
    REQUIRE(log.size() == 1);
    CHECK(log[0].outcome == AttemptOutcome::success);
    CHECK(coverage(log, stub.axes).size() == 1);

    auto many = random_baseline(50, std::cref(stub), stub.catalog, stub.axes, TemplateKind::block2, 3, 10);
    std::set<std::uint64_t> seeds;
    for (const auto& r : many)
        seeds.insert(r.seed);
    CHECK(seeds.size() == 50);
    for (const auto& r : many)
        CHECK(r.cell == bin_cell(r.density, r.difficulty, stub.axes));
    CHECK_THROWS_AS(random_baseline(0, std::cref(stub), stub.catalog, stub.axes, TemplateKind::block2, 3, 10), Error);
}

TEST_CASE("attempt log JSON round-trip")
{
    StubGenerator stub;
    auto state = fresh(stub, 10);
    auto rec = run_attempt(state, CellKey{2, 1}, TemplateKind::nbr_plus, std::cref(stub), stub.catalog);
    rec.index = 4;
    auto line = record_to_json(rec, stub.catalog, stub.axes, "explore");
    CHECK(line.find("\"cell_label\":\"density = (14-16), difficulty = (2-4)\"") != std::string::npos);
    auto back = record_from_json(line, stub.catalog);
    CHECK(back.index == 4);
    CHECK(back.cell == rec.cell);
    CHECK(back.seed == rec.seed);
    CHECK(back.outcome == rec.outcome);
    CHECK(back.level == rec.level);
    CHECK(back.density == rec.density);
    CHECK(back.difficulty == rec.difficulty);
    CHECK_THROWS_AS(record_from_json("{}", stub.catalog), Error);
}

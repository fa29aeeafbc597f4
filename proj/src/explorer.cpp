#include "erx/explorer.hpp"

#include "erx/dimacs.hpp"
#include "erx/encoder.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>

namespace erx {

std::string_view outcome_name(AttemptOutcome o)
{
    switch (o) {
    case AttemptOutcome::success: return "success";
    case AttemptOutcome::failed: return "failed";
    case AttemptOutcome::timed_out: return "timed_out";
    }
    return "?";
}

AttemptOutcome parse_outcome(std::string_view name)
{
    if (name == "success")
        return AttemptOutcome::success;
    if (name == "failed")
        return AttemptOutcome::failed;
    if (name == "timed_out")
        return AttemptOutcome::timed_out;
    throw Error("unknown attempt outcome '" + std::string(name) + "'");
}

ExplorationState init_state(const std::vector<TileGrid>& corpus, const TileCatalog& catalog,
                            const AxesSpec& axes, int threshold, double budget,
                            double attempt_timeout, std::uint64_t seed)
{
    axes.validate();
    if (threshold < 1)
        throw Error("explorer: threshold must be >= 1");
    ExplorationState state;
    state.axes = axes;
    state.threshold = threshold;
    state.budget = budget;
    state.attempt_timeout = attempt_timeout;
    state.rng.seed(seed);
    for (const auto& cell : axes.all_cells())
        state.counts[cell] = 0;
    for (const auto& seg : corpus)
        if (auto cell = bin_cell(density(seg, catalog), difficulty(seg, catalog), axes))
            ++state.counts[*cell];
    for (const auto& [cell, n] : state.counts)
        if (n >= threshold)
            state.blocklist.insert(cell);
    return state;
}

std::optional<CellKey> select_cell(ExplorationState& state, const std::set<CellKey>& exclude)
{
    std::vector<CellKey> fewest;
    int best = 0;
    for (const auto& [cell, n] : state.counts) {
        if (state.blocklist.count(cell) || exclude.count(cell))
            continue;
        if (fewest.empty() || n < best) {
            fewest.assign(1, cell);
            best = n;
        } else if (n == best) {
            fewest.push_back(cell);
        }
    }
    if (fewest.empty())
        return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, fewest.size() - 1);
    return fewest[pick(state.rng)];
}

AttemptRecord apply_attempt(ExplorationState& state, const CellKey& cell, TemplateKind kind,
                            std::uint64_t seed, GenerationResult result, const TileCatalog& catalog)
{
    AttemptRecord rec;
    rec.cell = cell;
    rec.template_kind = kind;
    rec.seed = seed;
    rec.elapsed = result.elapsed;
    state.spent += result.elapsed;
    switch (result.status) {
    case SolveStatus::sat: {
        if (!result.level)
            throw Error("explorer: generator reported success without a level");
        rec.density = density(*result.level, catalog);
        rec.difficulty = difficulty(*result.level, catalog);
        auto landed = bin_cell(rec.density, rec.difficulty, state.axes);
        if (!landed || *landed != cell)
            throw Error("explorer: generated level (density " + std::to_string(rec.density) + ", difficulty "
                        + std::to_string(rec.difficulty) + ") is outside the targeted cell "
                        + state.axes.describe(cell) + "; the encoding is unsound");
        rec.outcome = AttemptOutcome::success;
        rec.level = std::move(result.level);
        if (++state.counts[cell] >= state.threshold)
            state.blocklist.insert(cell);
        break;
    }
    case SolveStatus::unsat:
        rec.outcome = AttemptOutcome::failed;
        state.blocklist.insert(cell);
        break;
    case SolveStatus::timeout:
        rec.outcome = AttemptOutcome::timed_out;
        state.blocklist.insert(cell);
        break;
    }
    return rec;
}

AttemptRecord run_attempt(ExplorationState& state, const CellKey& cell, TemplateKind kind,
                          const Generator& generator, const TileCatalog& catalog)
{
    if (state.blocklist.count(cell))
        throw Error("explorer: cell " + state.axes.describe(cell) + " is blocklisted");
    std::uint64_t seed = state.rng();
    auto result = generator(cell, seed, state.attempt_timeout);
    return apply_attempt(state, cell, kind, seed, std::move(result), catalog);
}

std::vector<AttemptRecord> explore(ExplorationState& state, const Generator& generator,
                                   const TileCatalog& catalog, const ExploreOptions& options)
{
    std::vector<AttemptRecord> log;
    const std::size_t workers = static_cast<std::size_t>(std::max(options.workers, 1));
    auto emit = [&](AttemptRecord rec) {
        rec.index = log.size();
        if (options.on_record)
            options.on_record(rec);
        log.push_back(std::move(rec));
    };
    for (;;) {
        if (state.spent >= state.budget)
            break;
        std::size_t room = workers;
        if (options.max_attempts) {
            if (log.size() >= *options.max_attempts)
                break;
            room = std::min(room, *options.max_attempts - log.size());
        }
        std::vector<std::pair<CellKey, std::uint64_t>> batch;
        std::set<CellKey> in_flight;
        while (batch.size() < room) {
            auto cell = select_cell(state, in_flight);
            if (!cell)
                break;
            in_flight.insert(*cell);
            batch.emplace_back(*cell, state.rng());
        }
        if (batch.empty())
            break;
        const double timeout = std::min(state.attempt_timeout, state.budget - state.spent);
        if (batch.size() == 1) {
            auto result = generator(batch[0].first, batch[0].second, timeout);
            emit(apply_attempt(state, batch[0].first, options.template_kind, batch[0].second,
                               std::move(result), catalog));
            continue;
        }
        std::vector<std::future<GenerationResult>> running;
        for (const auto& [cell, seed] : batch)
            running.push_back(std::async(std::launch::async, [&generator, cell = cell, seed = seed, timeout] {
                return generator(cell, seed, timeout);
            }));
        // Parallel attempts overlap in wall-clock time; charge the batch once.
        const double before = state.spent;
        double longest = 0.0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            auto result = running[i].get();
            longest = std::max(longest, result.elapsed);
            emit(apply_attempt(state, batch[i].first, options.template_kind, batch[i].second,
                               std::move(result), catalog));
        }
        state.spent = before + longest;
    }
    return log;
}

std::vector<AttemptRecord> random_baseline(std::size_t attempts, const Generator& generator,
                                           const TileCatalog& catalog, const AxesSpec& axes,
                                           TemplateKind kind, std::uint64_t seed, double attempt_timeout,
                                           const std::function<void(const AttemptRecord&)>& on_record)
{
    if (attempts < 1)
        throw Error("baseline: need at least one attempt");
    std::mt19937_64 rng(seed);
    std::vector<AttemptRecord> log;
    std::set<std::uint64_t> used;
    while (log.size() < attempts) {
        std::uint64_t s = rng();
        if (!used.insert(s).second)
            continue;
        auto result = generator(std::nullopt, s, attempt_timeout);
        AttemptRecord rec;
        rec.index = log.size();
        rec.template_kind = kind;
        rec.seed = s;
        rec.elapsed = result.elapsed;
        if (result.status == SolveStatus::sat) {
            if (!result.level)
                throw Error("baseline: generator reported success without a level");
            rec.outcome = AttemptOutcome::success;
            rec.density = density(*result.level, catalog);
            rec.difficulty = difficulty(*result.level, catalog);
            rec.cell = bin_cell(rec.density, rec.difficulty, axes);
            rec.level = std::move(result.level);
        } else {
            rec.outcome = result.status == SolveStatus::unsat ? AttemptOutcome::failed : AttemptOutcome::timed_out;
        }
        if (on_record)
            on_record(rec);
        log.push_back(std::move(rec));
    }
    return log;
}

std::set<CellKey> coverage(const std::vector<AttemptRecord>& log, const AxesSpec& axes)
{
    std::set<CellKey> cells;
    for (const auto& rec : log)
        if (rec.outcome == AttemptOutcome::success)
            if (auto cell = bin_cell(rec.density, rec.difficulty, axes))
                cells.insert(*cell);
    return cells;
}

SatGenerator::SatGenerator(RuleSet rules, TileCatalog catalog, int width, int height, AxesSpec axes,
                           std::string external_command)
    : rules_(std::move(rules)), catalog_(std::move(catalog)), width_(width), height_(height),
      axes_(axes), external_command_(std::move(external_command))
{
    if (rules_.tile_symbols != catalog_.symbols())
        throw Error("generator: rule set was extracted with a different catalog");
}

GenerationResult SatGenerator::operator()(std::optional<CellKey> cell, std::uint64_t seed, double timeout) const
{
    const auto start = std::chrono::steady_clock::now();
    std::optional<CountRange> dens, diff;
    if (cell) {
        dens = axes_.density_range(*cell);
        diff = axes_.difficulty_range(*cell);
    }
    auto cnf = encode_task(width_, height_, rules_, catalog_, dens, diff);
    const double left = timeout - std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    SolveOutcome outcome = external_command_.empty() ? solve(cnf, seed, left)
                                                     : solve_external(external_command_, cnf, left);
    GenerationResult result;
    result.status = outcome.status;
    if (outcome.status == SolveStatus::sat) {
        if (!verify_model(cnf, outcome.model))
            throw Error("generator: solver model does not satisfy the instance");
        auto grid = decode(outcome.model, cnf);
        auto violations = check_grid(grid, rules_);
        if (!violations.empty())
            throw Error("generator: decoded level violates " + std::to_string(violations.size())
                        + " pattern rules");
        result.level = std::move(grid);
    }
    result.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string record_to_json(const AttemptRecord& rec, const TileCatalog& catalog, const AxesSpec& axes,
                           std::string_view mode)
{
    nlohmann::ordered_json j;
    j["attempt"] = rec.index;
    j["mode"] = mode;
    j["template"] = template_name(rec.template_kind);
    if (rec.cell) {
        j["cell"] = {rec.cell->density_bin, rec.cell->difficulty_bin};
        j["cell_label"] = axes.describe(*rec.cell);
    } else {
        j["cell"] = nullptr;
    }
    j["seed"] = rec.seed;
    j["outcome"] = outcome_name(rec.outcome);
    j["elapsed"] = rec.elapsed;
    if (rec.outcome == AttemptOutcome::success) {
        j["density"] = rec.density;
        j["difficulty"] = rec.difficulty;
        auto text = render_level(*rec.level, catalog);
        std::vector<std::string> rows;
        for (int r = 0; r < rec.level->height(); ++r)
            rows.push_back(text.substr(static_cast<std::size_t>(r) * (rec.level->width() + 1),
                                       static_cast<std::size_t>(rec.level->width())));
        j["level"] = rows;
    }
    return j.dump();
}

AttemptRecord record_from_json(std::string_view line, const TileCatalog& catalog)
{
    try {
        auto j = nlohmann::json::parse(line);
        AttemptRecord rec;
        rec.index = j.at("attempt").get<std::size_t>();
        rec.template_kind = parse_template(j.at("template").get<std::string>());
        if (!j.at("cell").is_null())
            rec.cell = CellKey{j["cell"].at(0).get<int>(), j["cell"].at(1).get<int>()};
        rec.seed = j.at("seed").get<std::uint64_t>();
        rec.outcome = parse_outcome(j.at("outcome").get<std::string>());
        rec.elapsed = j.at("elapsed").get<double>();
        if (rec.outcome == AttemptOutcome::success) {
            rec.density = j.at("density").get<int>();
            rec.difficulty = j.at("difficulty").get<int>();
            std::string text;
            for (const auto& row : j.at("level"))
                text += row.get<std::string>() + "\n";
            rec.level = parse_level(text, catalog);
        }
        return rec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("attempt log: ") + e.what());
    }
}

std::vector<AttemptRecord> read_log(const std::string& path, const TileCatalog& catalog)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open attempt log '" + path + "'");
    std::vector<AttemptRecord> log;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            log.push_back(record_from_json(line, catalog));
    return log;
}

}  // namespace erx

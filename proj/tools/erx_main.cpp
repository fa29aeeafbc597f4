// erx: learn tile patterns from example levels and explore the density x
// difficulty expressive range with a constraint solver.

#include "erx/config.hpp"
#include "erx/corpus.hpp"
#include "erx/dimacs.hpp"
#include "erx/encoder.hpp"
#include "erx/explorer.hpp"
#include "erx/patterns.hpp"
#include "erx/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

namespace fs = std::filesystem;
using namespace erx;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> budget;
    std::optional<double> timeout;
    std::optional<std::string> template_name;
    std::optional<int> workers;
    std::optional<std::string> output_dir;
    std::optional<std::size_t> max_attempts;
};

RunConfig effective_config(const std::string& config_path, const Overrides& o)
{
    RunConfig cfg;
    if (!config_path.empty()) {
        if (!fs::exists(config_path))
            throw Error("config file '" + config_path + "' does not exist");
        cfg = load_config(config_path);
    }
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.budget)
        cfg.budget_seconds = *o.budget;
    if (o.timeout)
        cfg.attempt_timeout_seconds = *o.timeout;
    if (o.template_name)
        cfg.template_kind = parse_template(*o.template_name);
    if (o.workers)
        cfg.workers = *o.workers;
    if (o.output_dir)
        cfg.output_dir = *o.output_dir;
    if (o.max_attempts)
        cfg.max_attempts = *o.max_attempts;
    cfg.validate();
    return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& rel)
{
    return (fs::path(cfg.output_dir) / rel).string();
}

void save_config_copy(const RunConfig& cfg)
{
    write_text_file(out_path(cfg, "config.json"), config_to_json(cfg));
}

TileCatalog require_catalog(const RunConfig& cfg)
{
    if (!fs::is_regular_file(cfg.catalog))
        throw Error("catalog file '" + cfg.catalog + "' does not exist");
    return load_catalog_file(cfg.catalog);
}

Corpus build_from_levels(const RunConfig& cfg, const TileCatalog& catalog)
{
    if (!fs::is_directory(cfg.levels_dir))
        throw Error("levels directory '" + cfg.levels_dir + "' does not exist");
    return build_corpus(read_level_dir(cfg.levels_dir), catalog, cfg.window_width, cfg.window_height, cfg.stride);
}

/// The saved corpus when `ingest` has run, otherwise built from the level files.
Corpus load_corpus(const RunConfig& cfg, const TileCatalog& catalog)
{
    auto saved = out_path(cfg, "corpus/corpus.txt");
    if (fs::is_regular_file(saved))
        return deserialize_corpus(read_text_file(saved), catalog);
    return build_from_levels(cfg, catalog);
}

RuleSet load_rules(const RunConfig& cfg, const Corpus& corpus, TemplateKind kind)
{
    auto path = out_path(cfg, "rules/" + std::string(template_name(kind)) + ".rules");
    if (fs::is_regular_file(path)) {
        auto rules = deserialize_rules(read_text_file(path));
        if (rules.tile_symbols != corpus.catalog.symbols())
            throw Error("rule file '" + path + "' was extracted with a different catalog");
        return rules;
    }
    auto rules = extract_rules(corpus, kind);
    write_text_file(path, serialize_rules(rules));
    return rules;
}

std::vector<TileGrid> seed_segments(const RunConfig& cfg, const Corpus& corpus)
{
    if (!corpus.empty() && corpus.segments.front().width() == cfg.level_width
        && corpus.segments.front().height() == cfg.level_height)
        return corpus.segments;
    std::cerr << "note: generated level size " << cfg.level_width << "x" << cfg.level_height
              << " differs from the corpus segment size; cell counts start at zero\n";
    return {};
}

std::string level_file_name(const AttemptRecord& rec)
{
    std::string name = rec.cell ? "d" + std::to_string(rec.cell->density_bin) + "_h"
                                      + std::to_string(rec.cell->difficulty_bin)
                                : std::string("out_of_range");
    return name + "_s" + std::to_string(rec.seed) + ".txt";
}

int cmd_ingest(const RunConfig& cfg)
{
    auto catalog = require_catalog(cfg);
    auto levels = read_level_dir(cfg.levels_dir);
    auto corpus = build_corpus(levels, catalog, cfg.window_width, cfg.window_height, cfg.stride);
    std::map<std::string, int> per_level;
    for (const auto& p : corpus.provenance)
        ++per_level[p.level];
    std::set<TileId> used;
    for (const auto& seg : corpus.segments)
        used.insert(seg.cells().begin(), seg.cells().end());
    for (const auto& [name, n] : per_level)
        std::cout << name << ": " << n << " windows\n";
    std::cout << "levels: " << levels.size() << "\nsegments: " << corpus.size() << "\ndistinct tiles: " << used.size()
              << "\n";
    write_text_file(out_path(cfg, "corpus/corpus.txt"), serialize_corpus(corpus));
    save_config_copy(cfg);
    return 0;
}

int cmd_extract(const RunConfig& cfg, bool all)
{
    auto catalog = require_catalog(cfg);
    auto corpus = load_corpus(cfg, catalog);
    std::vector<TemplateKind> kinds;
    if (all)
        kinds.assign(std::begin(kAllTemplates), std::end(kAllTemplates));
    else
        kinds.push_back(cfg.template_kind);
    for (auto kind : kinds) {
        auto rules = extract_rules(corpus, kind);
        auto path = out_path(cfg, "rules/" + std::string(template_name(kind)) + ".rules");
        write_text_file(path, serialize_rules(rules));
        std::cout << template_name(kind) << ": " << rules.tuple_count() << " allowed tuples -> " << path << "\n";
    }
    save_config_copy(cfg);
    return 0;
}

int cmd_generate(const RunConfig& cfg, bool baseline)
{
    auto catalog = require_catalog(cfg);
    auto corpus = load_corpus(cfg, catalog);
    auto rules = load_rules(cfg, corpus, cfg.template_kind);
    SatGenerator generator(rules, catalog, cfg.level_width, cfg.level_height, cfg.axes, cfg.external_solver);
    const std::string run = std::string(baseline ? "baseline-" : "explore-") + std::string(template_name(cfg.template_kind));
    const auto log_path = out_path(cfg, "logs/" + run + ".jsonl");
    const auto level_dir = out_path(cfg, "levels/" + run);
    fs::create_directories(fs::path(log_path).parent_path());
    fs::remove_all(level_dir);
    fs::create_directories(level_dir);
    save_config_copy(cfg);

    std::ofstream log(log_path, std::ios::trunc);
    auto sink = [&](const AttemptRecord& rec) {
        log << record_to_json(rec, catalog, cfg.axes, baseline ? "baseline" : "explore") << '\n';
        log.flush();
        if (rec.level)
            write_text_file((fs::path(level_dir) / level_file_name(rec)).string(), render_level(*rec.level, catalog));
        std::cerr << "[" << rec.index << "] "
                  << (rec.cell ? cfg.axes.describe(*rec.cell) : std::string("out of range")) << " -> "
                  << outcome_name(rec.outcome) << " (" << rec.elapsed << " s)\n";
    };

    std::vector<AttemptRecord> records;
    if (baseline) {
        records = random_baseline(cfg.baseline_attempts, std::cref(generator), catalog, cfg.axes,
                                  cfg.template_kind, cfg.seed, cfg.attempt_timeout_seconds, sink);
    } else {
        auto state = init_state(seed_segments(cfg, corpus), catalog, cfg.axes, cfg.threshold, cfg.budget_seconds,
                                cfg.attempt_timeout_seconds, cfg.seed);
        ExploreOptions opts;
        opts.template_kind = cfg.template_kind;
        opts.workers = cfg.workers;
        opts.max_attempts = cfg.max_attempts;
        opts.on_record = sink;
        records = explore(state, std::cref(generator), catalog, opts);
    }
    auto stats = attempt_table(records);
    std::cout << run << ": " << stats.total << " attempts, " << stats.successful << " successful, " << stats.failed
              << " failed, " << stats.timed_out << " timed out, " << coverage(records, cfg.axes).size()
              << " cells covered\n";
    return 0;
}

int cmd_report(const RunConfig& cfg)
{
    auto catalog = require_catalog(cfg);
    auto corpus = load_corpus(cfg, catalog);
    const auto logs_dir = out_path(cfg, "logs");
    const auto reports = out_path(cfg, "reports");
    fs::create_directories(reports);
    save_config_copy(cfg);

    const auto& initial = corpus.segments;
    auto init_hist = histogram(initial, catalog, cfg.axes);
    write_text_file(reports + "/initial/histogram.csv", histogram_csv({{Origin::initial, init_hist}}));
    std::vector<Origin> init_origins(initial.size(), Origin::initial);
    auto init_rows = interestingness_table(initial, init_origins, catalog, cfg.physics);
    write_text_file(reports + "/initial/interestingness.csv", interestingness_csv(init_rows));
    if (!initial.empty())
        write_text_file(reports + "/initial/tilefreq.csv", tilefreq_csv(tile_frequency(initial), catalog));

    std::vector<fs::path> logs;
    if (fs::is_directory(logs_dir))
        for (const auto& e : fs::directory_iterator(logs_dir))
            if (e.path().extension() == ".jsonl")
                logs.push_back(e.path());
    std::sort(logs.begin(), logs.end());

    std::vector<std::pair<std::string, AttemptStats>> table;
    for (const auto& path : logs) {
        const auto run = path.stem().string();
        auto records = read_log(path.string(), catalog);
        if (run.rfind("explore-", 0) == 0)
            table.emplace_back(run.substr(8), attempt_table(records));
        std::vector<TileGrid> generated;
        for (const auto& r : records)
            if (r.level)
                generated.push_back(*r.level);
        const auto dir = reports + "/" + run;
        write_text_file(dir + "/histogram.csv",
                        histogram_csv({{Origin::initial, init_hist},
                                       {Origin::generated, histogram(generated, catalog, cfg.axes)}}));
        std::vector<TileGrid> pool = initial;
        std::vector<Origin> origins(initial.size(), Origin::initial);
        pool.insert(pool.end(), generated.begin(), generated.end());
        origins.resize(pool.size(), Origin::generated);
        write_text_file(dir + "/interestingness.csv",
                        interestingness_csv(interestingness_table(pool, origins, catalog, cfg.physics)));
        if (!generated.empty())
            write_text_file(dir + "/tilefreq.csv", tilefreq_csv(tile_frequency(generated), catalog));
        std::cout << run << ": " << records.size() << " attempts, " << generated.size() << " levels -> " << dir
                  << "\n";
    }
    write_text_file(reports + "/attempts.csv", attempts_csv(table));
    return 0;
}

int cmd_check(const RunConfig& cfg, const std::string& level_path, const std::string& rules_path)
{
    auto catalog = require_catalog(cfg);
    if (!fs::is_regular_file(level_path))
        throw Error("level file '" + level_path + "' does not exist");
    if (!fs::is_regular_file(rules_path))
        throw Error("rules file '" + rules_path + "' does not exist");
    auto rules = deserialize_rules(read_text_file(rules_path));
    if (rules.tile_symbols != catalog.symbols())
        throw Error("rules file '" + rules_path + "' was extracted with a different catalog");
    auto grid = parse_level(read_text_file(level_path), catalog);
    auto violations = check_grid(grid, rules);
    auto name = [&](TileId t) {
        return t == catalog.boundary() ? std::string("<boundary>") : "'" + std::string(1, catalog.symbol(t)) + "'";
    };
    for (const auto& v : violations) {
        std::cout << "violation at row " << v.row << ", col " << v.col << ", group " << v.group << ": input "
                  << name(v.input) << " with";
        for (auto t : v.observed)
            std::cout << ' ' << name(t);
        std::cout << '\n';
    }
    std::cout << (violations.empty() ? "ok" : std::to_string(violations.size()) + " violations") << '\n';
    return violations.empty() ? 0 : 1;
}

int cmd_encode(const RunConfig& cfg, const std::vector<int>& cell, const std::string& output)
{
    auto catalog = require_catalog(cfg);
    auto corpus = load_corpus(cfg, catalog);
    auto rules = load_rules(cfg, corpus, cfg.template_kind);
    std::optional<CountRange> dens, diff;
    if (!cell.empty()) {
        if (cell.size() != 2)
            throw Error("--cell expects DENSITY_BIN,DIFFICULTY_BIN");
        CellKey key{cell[0], cell[1]};
        dens = cfg.axes.density_range(key);
        diff = cfg.axes.difficulty_range(key);
    }
    auto cnf = encode_task(cfg.level_width, cfg.level_height, rules, catalog, dens, diff);
    auto text = write_dimacs(cnf);
    if (output.empty() || output == "-")
        std::cout << text;
    else
        write_text_file(output, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"erx - constraint-based level generation over a density x difficulty expressive range"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    Overrides o;
    app.add_option("-c,--config", config_path, "JSON run configuration");
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--budget", o.budget, "Total exploration budget in seconds");
    app.add_option("--timeout", o.timeout, "Per-attempt solver timeout in seconds");
    app.add_option("--template", o.template_name, "Pattern template: ring, block2, nbr_plus");
    app.add_option("--workers", o.workers, "Parallel exploration workers");
    app.add_option("--out", o.output_dir, "Output directory");
    app.add_option("--max-attempts", o.max_attempts, "Stop exploring after this many attempts");

    auto* ingest = app.add_subcommand("ingest", "Cut the example levels into segments and save the corpus");
    auto* extract = app.add_subcommand("extract", "Extract pattern rules from the corpus");
    bool all_templates = false;
    extract->add_flag("--all", all_templates, "Extract rules for every template");
    auto* explore_cmd = app.add_subcommand("explore", "Explore underrepresented expressive-range cells");
    auto* baseline = app.add_subcommand("baseline", "Generate levels without count constraints");
    std::optional<std::size_t> baseline_attempts;
    baseline->add_option("--attempts", baseline_attempts, "Number of unconstrained generations");
    auto* report = app.add_subcommand("report", "Write CSV reports from the corpus and attempt logs");
    auto* check = app.add_subcommand("check", "Check a level file against a rule file");
    std::string level_path, rules_path;
    check->add_option("level", level_path, "Level text file")->required();
    check->add_option("rules", rules_path, "Rule file")->required();
    auto* encode = app.add_subcommand("encode", "Write the DIMACS CNF for one generation task");
    std::vector<int> cell;
    std::string encode_out;
    encode->add_option("--cell", cell, "Target cell as DENSITY_BIN,DIFFICULTY_BIN (omit for unconstrained)")
        ->delimiter(',');
    encode->add_option("-o,--output", encode_out, "Output file ('-' for stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = effective_config(config_path, o);
        if (baseline_attempts)
            cfg.baseline_attempts = *baseline_attempts;
        if (*ingest)
            return cmd_ingest(cfg);
        if (*extract)
            return cmd_extract(cfg, all_templates);
        if (*explore_cmd)
            return cmd_generate(cfg, false);
        if (*baseline)
            return cmd_generate(cfg, true);
        if (*report)
            return cmd_report(cfg);
        if (*check)
            return cmd_check(cfg, level_path, rules_path);
        if (*encode)
            return cmd_encode(cfg, cell, encode_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

#include "erx/config.hpp"

#include <json.hpp>

#include <filesystem>

namespace erx {

namespace {

std::string resolve(const std::string& base, const std::string& p)
{
    namespace fs = std::filesystem;
    if (p.empty() || fs::path(p).is_absolute() || base.empty())
        return p;
    return (fs::path(base) / p).lexically_normal().string();
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out)
{
    if (j.contains(key) && !j[key].is_null())
        out = j[key].get<T>();
}

}  // namespace

void RunConfig::validate() const
{
    if (window_width < 1 || window_height < 1 || stride < 1)
        throw Error("config: window size and stride must be >= 1");
    if (level_width < 1 || level_height < 1)
        throw Error("config: level size must be >= 1");
    axes.validate();
    if (threshold < 1)
        throw Error("config: threshold must be >= 1");
    if (budget_seconds < 0 || attempt_timeout_seconds <= 0)
        throw Error("config: budget must be >= 0 and attempt timeout > 0");
    if (workers < 1)
        throw Error("config: workers must be >= 1");
    if (baseline_attempts < 1)
        throw Error("config: baseline_attempts must be >= 1");
    physics.validate();
}

RunConfig config_from_json(std::string_view text, const std::string& base_dir)
{
    RunConfig c;
    try {
        auto j = nlohmann::json::parse(text);
        read(j, "levels_dir", c.levels_dir);
        read(j, "catalog", c.catalog);
        read(j, "output_dir", c.output_dir);
        if (j.contains("window")) {
            const auto& w = j["window"];
            read(w, "width", c.window_width);
            read(w, "height", c.window_height);
            read(w, "stride", c.stride);
        }
        if (j.contains("level")) {
            read(j["level"], "width", c.level_width);
            read(j["level"], "height", c.level_height);
        }
        if (j.contains("axes")) {
            const auto& a = j["axes"];
            read(a, "density_min", c.axes.density_min);
            read(a, "density_max", c.axes.density_max);
            read(a, "density_bin_width", c.axes.density_bin_width);
            read(a, "difficulty_min", c.axes.difficulty_min);
            read(a, "difficulty_max", c.axes.difficulty_max);
            read(a, "difficulty_bin_width", c.axes.difficulty_bin_width);
        }
        if (j.contains("template"))
            c.template_kind = parse_template(j["template"].get<std::string>());
        read(j, "threshold", c.threshold);
        read(j, "budget_seconds", c.budget_seconds);
        read(j, "attempt_timeout_seconds", c.attempt_timeout_seconds);
        read(j, "seed", c.seed);
        read(j, "workers", c.workers);
        if (j.contains("max_attempts") && !j["max_attempts"].is_null())
            c.max_attempts = j["max_attempts"].get<std::size_t>();
        read(j, "baseline_attempts", c.baseline_attempts);
        if (j.contains("physics")) {
            read(j["physics"], "max_jump_height", c.physics.max_jump_height);
            read(j["physics"], "max_jump_span", c.physics.max_jump_span);
        }
        read(j, "external_solver", c.external_solver);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }
    c.levels_dir = resolve(base_dir, c.levels_dir);
    c.catalog = resolve(base_dir, c.catalog);
    c.output_dir = resolve(base_dir, c.output_dir);
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path)
{
    auto base = std::filesystem::path(path).parent_path().string();
    return config_from_json(read_text_file(path), base);
}

std::string config_to_json(const RunConfig& c)
{
    nlohmann::ordered_json j;
    j["levels_dir"] = std::filesystem::absolute(c.levels_dir).lexically_normal().string();
    j["catalog"] = std::filesystem::absolute(c.catalog).lexically_normal().string();
    j["output_dir"] = std::filesystem::absolute(c.output_dir).lexically_normal().string();
    j["window"] = {{"width", c.window_width}, {"height", c.window_height}, {"stride", c.stride}};
    j["level"] = {{"width", c.level_width}, {"height", c.level_height}};
    j["axes"] = {{"density_min", c.axes.density_min},
                 {"density_max", c.axes.density_max},
                 {"density_bin_width", c.axes.density_bin_width},
                 {"difficulty_min", c.axes.difficulty_min},
                 {"difficulty_max", c.axes.difficulty_max},
                 {"difficulty_bin_width", c.axes.difficulty_bin_width}};
    j["template"] = template_name(c.template_kind);
    j["threshold"] = c.threshold;
    j["budget_seconds"] = c.budget_seconds;
    j["attempt_timeout_seconds"] = c.attempt_timeout_seconds;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["max_attempts"] = c.max_attempts ? nlohmann::ordered_json(*c.max_attempts) : nlohmann::ordered_json(nullptr);
    j["baseline_attempts"] = c.baseline_attempts;
    j["physics"] = {{"max_jump_height", c.physics.max_jump_height}, {"max_jump_span", c.physics.max_jump_span}};
    j["external_solver"] = c.external_solver;
    return j.dump(2) + "\n";
}

}  // namespace erx

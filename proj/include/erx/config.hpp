#pragma once

#include "erx/metrics.hpp"
#include "erx/pathfind.hpp"
#include "erx/patterns.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace erx {

/// Settings shared by every CLI subcommand. Relative paths in a config file
/// resolve against the directory holding that file.
struct RunConfig {
    std::string levels_dir = "data/smb";
    std::string catalog = "config/smb.catalog";
    std::string output_dir = "out";

    int window_width = 20;
    int window_height = 14;
    int stride = 1;

    int level_width = 20;   // generated level size
    int level_height = 14;

    AxesSpec axes;
    TemplateKind template_kind = TemplateKind::nbr_plus;
    int threshold = 10;
    double budget_seconds = 43200.0;
    double attempt_timeout_seconds = 900.0;
    std::uint64_t seed = 1;
    int workers = 1;
    std::optional<std::size_t> max_attempts;
    std::size_t baseline_attempts = 100;
    PhysicsSpec physics;
    std::string external_solver;  // empty: built-in solver

    /// Range checks on numeric fields (paths are checked by the subcommands that need them).
    void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig config_from_json(std::string_view text, const std::string& base_dir);
std::string config_to_json(const RunConfig& config);

}  // namespace erx

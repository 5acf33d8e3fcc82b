#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cirfilter/model.hpp"

namespace cirfilter {

struct SimulateConfig {
    std::optional<double> lambda0;  // fixed start; absent: draw from the prior
    double horizon = 10.0;
    double step = 1e-3;
    std::uint64_t seed = 1;
    std::size_t paths = 1;
};

struct QueryGrid {
    std::vector<double> times;  // strictly increasing
};

struct FilterConfig {
    std::vector<double> jumps;
    std::optional<std::string> jumps_file;  // one time per line; overrides `jumps`
    QueryGrid query_grid;                   // default: 101 points on [0, last jump + 1]
    std::vector<double> mgf_s;
    std::vector<double> horizons{1.0};
};

struct SurvivalConfig {
    std::vector<double> horizons;
    double t = 0.0;
    std::vector<double> jumps;
};

struct MixtureConfig {
    std::vector<double> jumps;
    double step = 0.005;
    std::optional<double> t_max;  // default: last jump + 1
};

struct ValidateConfig {
    std::size_t particles = 100000;
    std::size_t scenarios = 20;
    std::uint64_t seed = 1;
    double horizon = 6.0;
    std::size_t queries = 10;
    std::size_t max_jumps = 8;
};

/// One batch-run description: the model block plus per-command blocks.
/// Parsing is strict: unknown keys anywhere are rejected.
struct RunConfig {
    RawParams raw;
    std::optional<SimulateConfig> simulate;
    std::optional<FilterConfig> filter;
    std::optional<SurvivalConfig> survival;
    std::optional<MixtureConfig> mixture;
    std::optional<ValidateConfig> validate;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Applies a command-line seed override to every block that owns a seed.
void override_seed(RunConfig& config, std::uint64_t seed);

}  // namespace cirfilter

#include "cirfilter/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

#include <nlohmann/json.hpp>

#include "cirfilter/errors.hpp"

namespace cirfilter {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const char* context,
                         std::initializer_list<const char*> allowed) {
    const std::set<std::string> allowed_set(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!allowed_set.contains(item.key())) {
            throw ConfigError(std::string("unknown key '") + item.key() + "' in " + context);
        }
    }
}

double get_number(const json& j, const char* key, const char* context) {
    if (!j.contains(key)) {
        throw ConfigError(std::string("missing key '") + key + "' in " + context);
    }
    if (!j.at(key).is_number()) {
        throw ConfigError(std::string("key '") + key + "' in " + context + " must be a number");
    }
    return j.at(key).get<double>();
}

double get_number_or(const json& j, const char* key, const char* context, double fallback) {
    return j.contains(key) ? get_number(j, key, context) : fallback;
}

bool is_nonnegative_integer(const json& v) {
    return v.is_number_unsigned() ||
           (v.is_number_integer() && v.get<long long>() >= 0);
}

std::uint64_t get_seed_or(const json& j, const char* key, const char* context,
                          std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!is_nonnegative_integer(j.at(key))) {
        throw ConfigError(std::string("key '") + key + "' in " + context +
                          " must be an unsigned integer");
    }
    return j.at(key).get<std::uint64_t>();
}

std::size_t get_count_or(const json& j, const char* key, const char* context,
                         std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!is_nonnegative_integer(j.at(key))) {
        throw ConfigError(std::string("key '") + key + "' in " + context +
                          " must be a nonnegative integer");
    }
    return j.at(key).get<std::size_t>();
}

std::vector<double> get_number_list(const json& j, const char* context) {
    if (!j.is_array()) {
        throw ConfigError(std::string(context) + " must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) {
            throw ConfigError(std::string(context) + " must be an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

QueryGrid parse_query_grid(const json& j) {
    QueryGrid grid;
    if (j.is_array()) {
        grid.times = get_number_list(j, "query_grid");
    } else if (j.is_object()) {
        reject_unknown_keys(j, "query_grid", {"start", "stop", "points"});
        const double start = get_number(j, "start", "query_grid");
        const double stop = get_number(j, "stop", "query_grid");
        const std::size_t points = get_count_or(j, "points", "query_grid", 101);
        if (!(stop > start) || points < 2) {
            throw ConfigError("query_grid requires stop > start and points >= 2");
        }
        grid.times.resize(points);
        for (std::size_t i = 0; i < points; ++i) {
            grid.times[i] =
                start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
        }
    } else {
        throw ConfigError("query_grid must be an array or {start, stop, points}");
    }
    for (std::size_t i = 1; i < grid.times.size(); ++i) {
        if (!(grid.times[i] > grid.times[i - 1])) {
            throw ConfigError("query_grid times must be strictly increasing");
        }
    }
    if (!grid.times.empty() && grid.times.front() < 0.0) {
        throw ConfigError("query_grid times must be nonnegative");
    }
    return grid;
}

SimulateConfig parse_simulate(const json& j) {
    reject_unknown_keys(j, "simulate", {"lambda0", "horizon", "step", "seed", "paths"});
    SimulateConfig c;
    if (j.contains("lambda0")) c.lambda0 = get_number(j, "lambda0", "simulate");
    c.horizon = get_number_or(j, "horizon", "simulate", c.horizon);
    c.step = get_number_or(j, "step", "simulate", c.step);
    c.seed = get_seed_or(j, "seed", "simulate", c.seed);
    c.paths = get_count_or(j, "paths", "simulate", c.paths);
    return c;
}

FilterConfig parse_filter(const json& j) {
    reject_unknown_keys(j, "filter", {"jumps", "jumps_file", "query_grid", "mgf_s", "horizons"});
    FilterConfig c;
    if (j.contains("jumps")) c.jumps = get_number_list(j.at("jumps"), "filter.jumps");
    if (j.contains("jumps_file")) c.jumps_file = j.at("jumps_file").get<std::string>();
    if (j.contains("query_grid")) c.query_grid = parse_query_grid(j.at("query_grid"));
    if (j.contains("mgf_s")) c.mgf_s = get_number_list(j.at("mgf_s"), "filter.mgf_s");
    if (j.contains("horizons")) c.horizons = get_number_list(j.at("horizons"), "filter.horizons");
    for (double h : c.horizons) {
        if (!(h > 0.0)) throw ConfigError("filter.horizons must be positive");
    }
    return c;
}

SurvivalConfig parse_survival(const json& j) {
    reject_unknown_keys(j, "survival", {"horizons", "t", "jumps"});
    SurvivalConfig c;
    if (!j.contains("horizons")) throw ConfigError("survival requires 'horizons'");
    c.horizons = get_number_list(j.at("horizons"), "survival.horizons");
    for (double h : c.horizons) {
        if (!(h > 0.0)) throw ConfigError("survival.horizons must be positive");
    }
    c.t = get_number_or(j, "t", "survival", 0.0);
    if (j.contains("jumps")) c.jumps = get_number_list(j.at("jumps"), "survival.jumps");
    return c;
}

MixtureConfig parse_mixture(const json& j) {
    reject_unknown_keys(j, "mixture", {"jumps", "step", "t_max"});
    MixtureConfig c;
    if (!j.contains("jumps")) throw ConfigError("mixture requires 'jumps'");
    c.jumps = get_number_list(j.at("jumps"), "mixture.jumps");
    c.step = get_number_or(j, "step", "mixture", c.step);
    if (!(c.step > 0.0)) throw ConfigError("mixture.step must be positive");
    if (j.contains("t_max")) c.t_max = get_number(j, "t_max", "mixture");
    return c;
}

ValidateConfig parse_validate(const json& j) {
    reject_unknown_keys(j, "validate",
                        {"particles", "scenarios", "seed", "horizon", "queries", "max_jumps"});
    ValidateConfig c;
    c.particles = get_count_or(j, "particles", "validate", c.particles);
    c.scenarios = get_count_or(j, "scenarios", "validate", c.scenarios);
    c.seed = get_seed_or(j, "seed", "validate", c.seed);
    c.horizon = get_number_or(j, "horizon", "validate", c.horizon);
    c.queries = get_count_or(j, "queries", "validate", c.queries);
    c.max_jumps = get_count_or(j, "max_jumps", "validate", c.max_jumps);
    if (!(c.horizon > 0.0)) throw ConfigError("validate.horizon must be positive");
    if (c.queries < 1) throw ConfigError("validate.queries must be >= 1");
    return c;
}

}  // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(j, "config root",
                        {"alpha", "mu0", "beta", "phi", "simulate", "filter", "survival",
                         "mixture", "validate"});
    RunConfig config;
    config.raw.alpha = get_number(j, "alpha", "config root");
    config.raw.mu0 = get_number(j, "mu0", "config root");
    config.raw.beta = get_number(j, "beta", "config root");
    config.raw.phi = get_number(j, "phi", "config root");

    if (j.contains("simulate")) config.simulate = parse_simulate(j.at("simulate"));
    if (j.contains("filter")) config.filter = parse_filter(j.at("filter"));
    if (j.contains("survival")) config.survival = parse_survival(j.at("survival"));
    if (j.contains("mixture")) config.mixture = parse_mixture(j.at("mixture"));
    if (j.contains("validate")) config.validate = parse_validate(j.at("validate"));
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

void override_seed(RunConfig& config, std::uint64_t seed) {
    if (config.simulate) config.simulate->seed = seed;
    if (config.validate) config.validate->seed = seed;
}

}  // namespace cirfilter

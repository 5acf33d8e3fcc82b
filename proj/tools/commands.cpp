#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cirfilter/errors.hpp"
#include "cirfilter/filter.hpp"
#include "cirfilter/mixture.hpp"
#include "cirfilter/particle_filter.hpp"
#include "cirfilter/rng.hpp"
#include "cirfilter/simulation.hpp"

namespace cirfilter::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const std::string& out_dir, const std::string& name) {
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write output file: " + path.string());
    }
    return out;
}

JumpRecord jumps_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open jumps file: " + path);
    }
    std::vector<double> times;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            times.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw ConfigError("jumps file contains a non-numeric line: " + line);
        }
    }
    return make_jump_record(std::move(times));
}

JumpRecord resolve_jumps(const FilterConfig& cfg) {
    if (cfg.jumps_file) return jumps_from_file(*cfg.jumps_file);
    return make_jump_record(cfg.jumps);
}

std::vector<double> default_query_grid(const JumpRecord& jumps) {
    const double stop = jumps.empty() ? 1.0 : jumps.times.back() + 1.0;
    std::vector<double> grid(101);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = stop * static_cast<double>(i) / 100.0;
    }
    return grid;
}

void write_path_csv(std::ofstream& out, const SimPath& path) {
    out << "t,lambda\n";
    for (std::size_t i = 0; i < path.grid.size(); ++i) {
        out << csv_number(path.grid[i]) << ',' << csv_number(path.intensity[i]) << '\n';
    }
}

void write_jumps_file(std::ofstream& out, const JumpRecord& jumps) {
    for (double t : jumps.times) {
        out << csv_number(t) << '\n';
    }
}

void write_filter_row(std::ofstream& out, const FilterState& st, const FilterConfig& cfg) {
    out << csv_number(st.t) << ',' << st.n() << ',' << csv_number(st.rate()) << ','
        << csv_number(conditional_mean(st));
    for (double s : cfg.mgf_s) {
        out << ',' << csv_number(conditional_mgf(st, s));
    }
    for (double h : cfg.horizons) {
        out << ',' << csv_number(conditional_survival(st, h));
    }
    out << '\n';
}

}  // namespace

std::string csv_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

int run_simulate(const RunConfig& config, const std::string& out_dir) {
    if (!config.simulate) throw ConfigError("simulate block missing from config");
    const SimulateConfig& cfg = *config.simulate;
    const ValidatedModel model = validate_params(config.raw);

    const bool indexed = cfg.paths > 1;
    for (std::size_t k = 0; k < std::max<std::size_t>(cfg.paths, 1); ++k) {
        if (cfg.paths == 0) break;
        const std::uint64_t path_seed = derive_stream(cfg.seed, k);
        const SimPath path =
            cfg.lambda0 ? simulate_scenario(model.params, *cfg.lambda0, cfg.horizon, cfg.step,
                                            path_seed)
                        : simulate_scenario(model.params, model.initial_law, cfg.horizon,
                                            cfg.step, path_seed);
        const std::string suffix = indexed ? "_" + std::to_string(k) : "";
        auto path_out = open_output(out_dir, "path" + suffix + ".csv");
        write_path_csv(path_out, path);
        auto jumps_out = open_output(out_dir, "jumps" + suffix + ".txt");
        write_jumps_file(jumps_out, path.jumps);
    }
    if (cfg.paths == 0) {
        auto path_out = open_output(out_dir, "path.csv");
        path_out << "t,lambda\n";
        auto jumps_out = open_output(out_dir, "jumps.txt");
    }
    return 0;
}

int run_filter(const RunConfig& config, const std::string& out_dir) {
    if (!config.filter) throw ConfigError("filter block missing from config");
    const FilterConfig& cfg = *config.filter;
    const ValidatedModel model = validate_params(config.raw);
    const JumpRecord jumps = resolve_jumps(cfg);
    const std::vector<double> grid =
        cfg.query_grid.times.empty() ? default_query_grid(jumps) : cfg.query_grid.times;

    auto out = open_output(out_dir, "filter_trace.csv");
    out << "t,n,Q,lambda_hat";
    for (double s : cfg.mgf_s) out << ",mgf_s" << csv_number(s);
    for (double h : cfg.horizons) out << ",survival_" << csv_number(h) << 'y';
    out << '\n';

    // Rows in time order; each jump emits a (T-, T+) pair exposing the
    // discontinuity. A grid point equal to a jump time is covered by that
    // pair rather than emitted twice.
    FilterState st = init_filter(model.params, config.raw.phi);
    std::size_t next_jump = 0;
    for (double t : grid) {
        while (next_jump < jumps.count() && jumps.times[next_jump] <= t) {
            const double jump_time = jumps.times[next_jump];
            st = advance(st, jump_time);
            write_filter_row(out, st, cfg);  // T-
            st = jump_update(st);
            write_filter_row(out, st, cfg);  // T+
            ++next_jump;
        }
        if (next_jump > 0 && jumps.times[next_jump - 1] == t) continue;
        st = advance(st, t);
        write_filter_row(out, st, cfg);
    }
    return 0;
}

int run_survival(const RunConfig& config, const std::string& out_dir) {
    if (!config.survival) throw ConfigError("survival block missing from config");
    const SurvivalConfig& cfg = *config.survival;
    const ValidatedModel model = validate_params(config.raw);
    const JumpRecord jumps = make_jump_record(cfg.jumps);
    const FilterState st = filter_state_at(model.params, config.raw.phi, jumps, cfg.t);

    auto out = open_output(out_dir, "survival.csv");
    out << "horizon,survival\n";
    for (double h : cfg.horizons) {
        out << csv_number(h) << ',' << csv_number(conditional_survival(st, h)) << '\n';
    }
    return 0;
}

int run_mixture(const RunConfig& config, const std::string& out_dir) {
    if (!config.mixture) throw ConfigError("mixture block missing from config");
    const MixtureConfig& cfg = *config.mixture;
    const ValidatedModel model = validate_params(config.raw);
    const JumpRecord jumps = make_jump_record(cfg.jumps);
    const double t_max = cfg.t_max ? *cfg.t_max : (jumps.empty() ? 1.0 : jumps.times.back() + 1.0);

    FilterState st = init_filter(model.params, config.raw.phi);
    for (std::size_t interval = 0; interval <= jumps.count(); ++interval) {
        const double start = interval == 0 ? 0.0 : jumps.times[interval - 1];
        const double stop =
            interval < jumps.count() ? std::min(jumps.times[interval], t_max) : t_max;
        if (interval > 0) {
            st = jump_update(advance(st, start));
        }
        if (!(stop > start)) continue;

        auto out = open_output(out_dir, "mixture_n" + std::to_string(interval) + ".csv");
        out << "t";
        for (std::size_t j = 0; j <= interval; ++j) out << ",pi_" << j;
        out << '\n';
        for (std::size_t i = 0;; ++i) {
            const double t = start + static_cast<double>(i) * cfg.step;
            if (!(t < stop - 1e-12)) break;
            const GammaMixture mix = mixture_from_state(advance(st, t));
            out << csv_number(t);
            for (double w : mix.weights) out << ',' << csv_number(w);
            out << '\n';
        }
    }
    return 0;
}

int run_validate(const RunConfig& config, const std::string& out_dir) {
    if (!config.validate) throw ConfigError("validate block missing from config");
    const ValidateConfig& cfg = *config.validate;
    const ValidatedModel model = validate_params(config.raw);

    std::vector<double> queries(cfg.queries);
    for (std::size_t q = 0; q < cfg.queries; ++q) {
        queries[q] = cfg.horizon * static_cast<double>(q + 1) / static_cast<double>(cfg.queries);
    }

    std::size_t checks = 0;
    std::size_t exceed = 0;
    for (std::size_t i = 0; i < cfg.scenarios; ++i) {
        // Redraw until the scenario stays within the jump budget.
        SimPath sim;
        std::uint64_t scenario_seed = 0;
        bool found = false;
        for (std::size_t attempt = 0; attempt < 200; ++attempt) {
            scenario_seed = derive_stream(cfg.seed, i * 1000 + attempt);
            sim = simulate_scenario(model.params, model.initial_law, cfg.horizon, 1e-3,
                                    scenario_seed);
            if (sim.jumps.count() <= cfg.max_jumps) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw Error("could not draw a scenario within the jump budget");
        }

        PfOptions pf;
        pf.particles = cfg.particles;
        pf.seed = derive_stream(scenario_seed, 777);
        const auto estimates =
            particle_filter(sim.jumps, model.params, model.initial_law, queries, {}, pf);

        auto out = open_output(out_dir, "validate_scenario_" + std::to_string(i) + ".csv");
        out << "t,exact_lambda_hat,pf_estimate,pf_se,z_score\n";
        std::size_t scenario_exceed = 0;
        for (std::size_t q = 0; q < queries.size(); ++q) {
            const FilterState st =
                filter_state_at(model.params, config.raw.phi, sim.jumps, queries[q]);
            const double exact = conditional_mean(st);
            const double z = (estimates[q].lambda_hat.value - exact) / estimates[q].lambda_hat.se;
            out << csv_number(queries[q]) << ',' << csv_number(exact) << ','
                << csv_number(estimates[q].lambda_hat.value) << ','
                << csv_number(estimates[q].lambda_hat.se) << ',' << csv_number(z) << '\n';
            ++checks;
            if (std::abs(z) > 3.0) {
                ++exceed;
                ++scenario_exceed;
            }
        }
        std::cout << "scenario " << i << ": jumps=" << sim.jumps.count()
                  << " checks=" << queries.size() << " |z|>3: " << scenario_exceed << '\n';
    }

    // Roughly 1% of checks may land outside 3 standard errors by chance.
    const std::size_t budget = std::max<std::size_t>(1, checks / 100);
    std::cout << "total checks=" << checks << " exceed=" << exceed << " budget=" << budget
              << (exceed <= budget ? " -> OK" : " -> FAIL") << '\n';
    return exceed <= budget ? 0 : 1;
}

}  // namespace cirfilter::cli

#include "cirfilter/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "cirfilter/errors.hpp"
#include "cirfilter/rng.hpp"

namespace cirfilter {

double CirTransition::step(double lambda, double dt, std::mt19937_64& rng) const {
    const double decay = std::exp(-params_.alpha * dt);
    // c = rho (1 - e^{-alpha dt}) / (4 alpha), via expm1 for small alpha*dt.
    const double c = -params_.rho * std::expm1(-params_.alpha * dt) / (4.0 * params_.alpha);
    const double nc = lambda * decay / c;

    double chi2;
    if (dof_ >= 1.0) {
        std::normal_distribution<double> normal;
        const double z = normal(rng) + std::sqrt(nc);
        double rest = 0.0;
        if (dof_ > 1.0) {
            std::gamma_distribution<double> gamma(0.5 * (dof_ - 1.0), 2.0);
            rest = gamma(rng);
        }
        chi2 = z * z + rest;
    } else {
        std::poisson_distribution<long> poisson(0.5 * nc);
        const long j = poisson(rng);
        std::gamma_distribution<double> gamma(0.5 * dof_ + static_cast<double>(j), 2.0);
        chi2 = gamma(rng);
    }
    return c * chi2;
}

std::vector<double> make_time_grid(double horizon, double step) {
    if (!(step > 0.0) || !(horizon > step)) {
        throw InvalidGrid("time grid requires 0 < step < horizon");
    }
    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-12));
    const double h = horizon / static_cast<double>(n_steps);
    std::vector<double> grid(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) {
        grid[i] = h * static_cast<double>(i);
    }
    grid.back() = horizon;
    return grid;
}

std::vector<double> simulate_cir(const ModelParams& params, double lambda0, double horizon,
                                 double step, std::uint64_t seed) {
    if (!(lambda0 >= 0.0)) {
        throw OutOfDomain("simulate_cir requires lambda0 >= 0");
    }
    const auto grid = make_time_grid(horizon, step);
    const CirTransition transition(params);
    auto rng = make_engine(seed);

    std::vector<double> path(grid.size());
    path[0] = lambda0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        path[i] = transition.step(path[i - 1], grid[i] - grid[i - 1], rng);
    }
    return path;
}

std::vector<double> simulate_cir_euler(const ModelParams& params, double lambda0,
                                       double horizon, double step, std::uint64_t seed) {
    if (!(lambda0 >= 0.0)) {
        throw OutOfDomain("simulate_cir_euler requires lambda0 >= 0");
    }
    const auto grid = make_time_grid(horizon, step);
    auto rng = make_engine(seed);
    std::normal_distribution<double> normal;

    // Full truncation: drift and diffusion read the positive part, the
    // reported path is the positive part of the internal state.
    std::vector<double> path(grid.size());
    double x = lambda0;
    path[0] = lambda0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double h = grid[i] - grid[i - 1];
        const double xp = std::max(x, 0.0);
        x += -params.alpha * (xp - params.mu0) * h +
             params.beta * std::sqrt(xp * h) * normal(rng);
        path[i] = std::max(x, 0.0);
    }
    return path;
}

JumpRecord simulate_cox_jumps(std::span<const double> grid, std::span<const double> intensity,
                              std::uint64_t seed) {
    if (grid.size() != intensity.size() || grid.size() < 2) {
        throw InvalidGrid("jump simulation needs matching grid/intensity of size >= 2");
    }
    auto rng = make_engine(seed, 0);
    std::exponential_distribution<double> exponential(1.0);

    std::vector<double> jumps;
    double target = exponential(rng);  // next unit-exponential partial sum
    double hazard = 0.0;               // cumulative hazard at grid[i]
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = grid[i + 1] - grid[i];
        const double increment = 0.5 * (intensity[i] + intensity[i + 1]) * h;
        if (increment <= 0.0) {
            hazard += increment;
            continue;
        }
        while (target <= hazard + increment) {
            const double t = grid[i] + (target - hazard) / increment * h;
            if (jumps.empty() || t > jumps.back()) {
                jumps.push_back(t);
            }
            target += exponential(rng);
        }
        hazard += increment;
    }
    return JumpRecord{std::move(jumps)};
}

double draw_initial_intensity(const GammaLaw& law, std::mt19937_64& rng) {
    std::gamma_distribution<double> gamma(law.shape, 1.0 / law.rate);
    return gamma(rng);
}

double draw_initial_intensity(const GammaLaw& law, std::uint64_t seed) {
    auto rng = make_engine(seed);
    return draw_initial_intensity(law, rng);
}

namespace {

SimPath finish_scenario(const ModelParams& params, double lambda0, double horizon, double step,
                        std::uint64_t seed) {
    SimPath out;
    out.grid = make_time_grid(horizon, step);
    out.seed = seed;
    out.step = out.grid[1] - out.grid[0];

    const CirTransition transition(params);
    auto rng = make_engine(seed, 1);
    out.intensity.resize(out.grid.size());
    out.intensity[0] = lambda0;
    for (std::size_t i = 1; i < out.grid.size(); ++i) {
        out.intensity[i] = transition.step(out.intensity[i - 1], out.grid[i] - out.grid[i - 1], rng);
    }
    out.jumps = simulate_cox_jumps(out.grid, out.intensity, derive_stream(seed, 2));
    return out;
}

}  // namespace

SimPath simulate_scenario(const ModelParams& params, const GammaLaw& initial_law,
                          double horizon, double step, std::uint64_t seed) {
    auto rng = make_engine(seed, 0);
    return finish_scenario(params, draw_initial_intensity(initial_law, rng), horizon, step, seed);
}

SimPath simulate_scenario(const ModelParams& params, double lambda0, double horizon,
                          double step, std::uint64_t seed) {
    if (!(lambda0 >= 0.0)) {
        throw OutOfDomain("simulate_scenario requires lambda0 >= 0");
    }
    return finish_scenario(params, lambda0, horizon, step, seed);
}

}  // namespace cirfilter

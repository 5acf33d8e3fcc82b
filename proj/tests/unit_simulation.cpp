#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cirfilter/model.hpp"
#include "cirfilter/parallel.hpp"
#include "cirfilter/rng.hpp"
#include "cirfilter/simulation.hpp"
#include "support/test_oracles.hpp"

using namespace cirfilter;

namespace {

const ModelParams kP1 = make_params(0.5, 0.4, 0.5);

double cir_mean(const ModelParams& p, double lambda0, double t) {
    const double e = std::exp(-p.alpha * t);
    return lambda0 * e + p.mu0 * (1.0 - e);
}

double cir_variance(const ModelParams& p, double lambda0, double t) {
    const double e = std::exp(-p.alpha * t);
    return lambda0 * (p.rho / p.alpha) * (e - e * e) +
           p.mu0 * p.rho / (2.0 * p.alpha) * (1.0 - e) * (1.0 - e);
}

}  // namespace

TEST_CASE("grid construction and validation") {
    const auto grid = make_time_grid(10.0, 1e-3);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 10.0);
    CHECK(grid.size() == 10001);
    CHECK_THROWS_AS(make_time_grid(1.0, 0.0), InvalidGrid);
    CHECK_THROWS_AS(make_time_grid(1.0, -0.1), InvalidGrid);
    CHECK_THROWS_AS(make_time_grid(1.0, 1.0), InvalidGrid);
    CHECK_THROWS_AS(simulate_cir(kP1, 0.4, 1.0, 2.0, 1), InvalidGrid);
}

TEST_CASE("paths are deterministic in the seed and nonnegative") {
    const auto a = simulate_cir(kP1, 0.4, 5.0, 0.01, 42);
    const auto b = simulate_cir(kP1, 0.4, 5.0, 0.01, 42);
    const auto c = simulate_cir(kP1, 0.4, 5.0, 0.01, 43);
    CHECK(a == b);
    CHECK(a != c);
    for (double v : a) CHECK(v >= 0.0);
}

TEST_CASE("vanishing diffusion collapses to the mean-reversion ode") {
    const ModelParams tiny = make_params(0.5, 0.4, 1e-8);
    const auto path = simulate_cir(tiny, 0.9, 5.0, 0.01, 7);
    const auto grid = make_time_grid(5.0, 0.01);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(path[i] - cir_mean(tiny, 0.9, grid[i])));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("transition matches the exact first two moments") {
    const std::size_t n_paths = 100000;
    std::vector<double> terminal(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        auto rng = make_engine(1234, i);
        const CirTransition transition(kP1);
        double lambda = 0.4;
        for (int k = 0; k < 20; ++k) lambda = transition.step(lambda, 0.5, rng);
        terminal[i] = lambda;
    });
    const auto m = testsupport::sample_moments(terminal);
    CHECK(std::abs(m.mean - cir_mean(kP1, 0.4, 10.0)) < 3.0 * m.se_mean);
    CHECK(std::abs(m.var - cir_variance(kP1, 0.4, 10.0)) < 3.0 * m.se_var);
    // By t = 10 the path is near stationarity; its variance is close to
    // mu0 rho / (2 alpha).
    CHECK(std::abs(m.var - kP1.mu0 * kP1.rho / (2.0 * kP1.alpha)) <
          3.0 * m.se_var + 1e-4);
}

TEST_CASE("low-dof branch (positivity condition violated) keeps the moments") {
    const ModelParams p = make_params(0.5, 0.1, 0.5);  // 4 theta = 0.8 < 1
    const std::size_t n_paths = 60000;
    std::vector<double> terminal(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        auto rng = make_engine(99, i);
        const CirTransition transition(p);
        double lambda = 0.3;
        for (int k = 0; k < 8; ++k) lambda = transition.step(lambda, 0.5, rng);
        terminal[i] = lambda;
    });
    const auto m = testsupport::sample_moments(terminal);
    CHECK(std::abs(m.mean - cir_mean(p, 0.3, 4.0)) < 3.0 * m.se_mean);
    CHECK(std::abs(m.var - cir_variance(p, 0.3, 4.0)) < 3.0 * m.se_var);
}

TEST_CASE("euler fallback agrees with the exact sampler in distribution") {
    const std::size_t n_paths = 20000;
    std::vector<double> exact(n_paths), euler(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        exact[i] = simulate_cir(kP1, 0.4, 2.0, 0.05, derive_stream(5, i)).back();
        euler[i] = simulate_cir_euler(kP1, 0.4, 2.0, 0.002, derive_stream(6, i)).back();
    });
    const auto me = testsupport::sample_moments(exact);
    const auto mu = testsupport::sample_moments(euler);
    CHECK(std::abs(me.mean - mu.mean) < 3.0 * std::hypot(me.se_mean, mu.se_mean) + 2e-3);
}

TEST_CASE("zero intensity produces no jumps") {
    const std::vector<double> grid = make_time_grid(10.0, 0.1);
    const std::vector<double> zero(grid.size(), 0.0);
    CHECK(simulate_cox_jumps(grid, zero, 3).empty());
}

TEST_CASE("unit-intensity jump counts are Poisson(10) on [0,10]") {
    const std::vector<double> grid = make_time_grid(10.0, 0.05);
    const std::vector<double> one(grid.size(), 1.0);
    const std::size_t reps = 10000;
    std::vector<double> counts(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        counts[r] = static_cast<double>(simulate_cox_jumps(grid, one, derive_stream(17, r)).count());
    }
    const auto m = testsupport::sample_moments(counts);
    CHECK(std::abs(m.mean - 10.0) < 3.0 * m.se_mean);
    CHECK(std::abs(m.var - 10.0) < 3.0 * m.se_var);
}

TEST_CASE("inter-jump gaps at constant intensity are exponential") {
    const double c = 0.7;
    const std::vector<double> grid = make_time_grid(20000.0, 0.05);
    const std::vector<double> level(grid.size(), c);
    const JumpRecord jumps = simulate_cox_jumps(grid, level, 31);
    REQUIRE(jumps.count() > 10000);
    std::vector<double> gaps;
    gaps.reserve(10000);
    double prev = 0.0;
    for (std::size_t i = 0; i < 10000; ++i) {
        gaps.push_back(jumps.times[i] - prev);
        prev = jumps.times[i];
    }
    const double d = testsupport::ks_statistic(gaps, [c](double x) {
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-c * x);
    });
    CHECK(testsupport::ks_pvalue(d, gaps.size()) > 0.01);
}

TEST_CASE("hazard at each jump equals the exponential partial sum") {
    // Piecewise-linear cumulative hazard evaluated at the produced jump
    // times must reproduce iid unit exponentials; checked distributionally.
    const std::vector<double> grid = make_time_grid(4000.0, 0.02);
    std::vector<double> intensity(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        intensity[i] = 0.6 + 0.4 * std::sin(0.37 * grid[i]);
    }
    const JumpRecord jumps = simulate_cox_jumps(grid, intensity, 77);
    REQUIRE(jumps.count() > 1500);

    std::vector<double> hazard(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        hazard[i] = hazard[i - 1] +
                    0.5 * (intensity[i - 1] + intensity[i]) * (grid[i] - grid[i - 1]);
    }
    std::vector<double> increments;
    double prev = 0.0;
    for (double t : jumps.times) {
        const auto it = std::upper_bound(grid.begin(), grid.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
        const std::size_t lo = hi - 1;
        const double frac = (t - grid[lo]) / (grid[hi] - grid[lo]);
        const double h = hazard[lo] + frac * (hazard[hi] - hazard[lo]);
        increments.push_back(h - prev);
        prev = h;
    }
    const double d = testsupport::ks_statistic(increments, [](double x) {
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x);
    });
    CHECK(testsupport::ks_pvalue(d, increments.size()) > 0.01);
}

TEST_CASE("doubly stochastic counts match the integrated mean intensity") {
    const double horizon = 5.0;
    const std::size_t reps = 10000;
    std::vector<double> counts(reps);
    parallel_for(reps, [&](std::size_t r) {
        const SimPath sim = simulate_scenario(kP1, 0.4, horizon, 0.01, derive_stream(23, r));
        counts[r] = static_cast<double>(sim.jumps.count());
    });
    // E[N_T] = mu0 T + (lambda0 - mu0)(1 - e^{-alpha T})/alpha by Fubini.
    const double expected =
        kP1.mu0 * horizon + (0.4 - kP1.mu0) * (1.0 - std::exp(-kP1.alpha * horizon)) / kP1.alpha;
    const auto m = testsupport::sample_moments(counts);
    CHECK(std::abs(m.mean - expected) < 3.0 * m.se_mean);
}

TEST_CASE("initial-intensity draws follow the gamma law") {
    const GammaLaw law{1.6, 4.0};
    const std::size_t n = 1000000;
    std::vector<double> draws(n);
    parallel_for(n, [&](std::size_t i) { draws[i] = draw_initial_intensity(law, derive_stream(3, i)); });
    const auto m = testsupport::sample_moments(draws);
    CHECK(std::abs(m.mean - 0.4) < 3.0 * m.se_mean);
    CHECK(std::abs(m.var - law.variance()) < 3.0 * m.se_var);

    // Shape 1 reduces to the exponential law.
    const GammaLaw expo{1.0, 2.5};
    std::vector<double> e(10000);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = draw_initial_intensity(expo, derive_stream(4, i));
    const double d = testsupport::ks_statistic(e, [&](double x) {
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-expo.rate * x);
    });
    CHECK(testsupport::ks_pvalue(d, e.size()) > 0.01);

    CHECK(draw_initial_intensity(law, std::uint64_t{11}) ==
          draw_initial_intensity(law, std::uint64_t{11}));
}

TEST_CASE("scenario bundles are reproducible and internally consistent") {
    const SimPath a = simulate_scenario(kP1, GammaLaw{1.6, 4.0}, 8.0, 0.01, 101);
    const SimPath b = simulate_scenario(kP1, GammaLaw{1.6, 4.0}, 8.0, 0.01, 101);
    CHECK(a.intensity == b.intensity);
    CHECK(a.jumps.times == b.jumps.times);
    CHECK(a.grid.size() == a.intensity.size());
    for (double t : a.jumps.times) {
        CHECK(t > 0.0);
        CHECK(t <= 8.0);
    }
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "cirfilter/filter.hpp"
#include "cirfilter/model.hpp"
#include "cirfilter/pde_oracle.hpp"

using namespace cirfilter;

namespace {

const ModelParams kP1 = make_params(0.5, 0.4, 0.5);

double max_rel_err_on_band(const PdeSolver& solver, const PdeGrid& grid,
                           const FilterState& state, double s_lo, double s_hi) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.s.size(); ++i) {
        const double s = grid.s[i];
        if (s < s_lo || s > s_hi) continue;
        const double oracle = PdeSolver::mgf_at(grid, i);
        const double closed = conditional_mgf(state, s);
        worst = std::max(worst, std::abs(oracle - closed) / std::abs(closed));
    }
    return worst;
}

}  // namespace

TEST_CASE("finite-difference weights reproduce known stencils") {
    const std::vector<double> nodes = {-2.0, -1.0, 0.0, 1.0, 2.0};
    const auto w = fd_weights(0.0, nodes, 1);
    // Central 4th-order first derivative: (1, -8, 0, 8, -1)/12.
    CHECK(w[0] == doctest::Approx(1.0 / 12).epsilon(1e-13));
    CHECK(w[1] == doctest::Approx(-8.0 / 12).epsilon(1e-13));
    CHECK(w[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(w[3] == doctest::Approx(8.0 / 12).epsilon(1e-13));
    CHECK(w[4] == doctest::Approx(-1.0 / 12).epsilon(1e-13));

    // Any 5-node stencil differentiates quartics exactly.
    const std::vector<double> skew = {0.0, 0.7, 1.1, 2.0, 3.4};
    const auto ws = fd_weights(1.1, skew, 1);
    double d = 0.0;
    for (std::size_t i = 0; i < skew.size(); ++i) d += ws[i] * std::pow(skew[i], 4);
    CHECK(d == doctest::Approx(4.0 * std::pow(1.1, 3)).epsilon(1e-12));
}

TEST_CASE("grid always contains s = 0 as a node") {
    const PdeGrid g = make_pde_grid(-5.0, 2.0, 2001);
    CHECK(g.s[g.zero_index] == 0.0);
    CHECK(g.s.front() == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(g.s.back() > 1.9);
    CHECK_THROWS_AS(make_pde_grid(1.0, 2.0, 2001), InvalidGrid);
    CHECK_THROWS_AS(make_pde_grid(-1.0, 2.0, 5), InvalidGrid);
    CHECK(default_s_max(4.0) == 2.0);
    CHECK(default_s_max(2.5) == 1.25);
}

TEST_CASE("degenerate coefficients transport the profile exactly") {
    // dg/dt = -dg/ds moves the initial profile right: g(s,t) = w(s - t).
    const PdeCoeffs transport{0.0, -1.0, 0.0, 0.0};
    PdeGrid grid = make_pde_grid(-5.0, 2.0, 1401);
    for (std::size_t i = 0; i < grid.s.size(); ++i) {
        grid.g[i] = std::exp(-2.0 * (grid.s[i] + 1.5) * (grid.s[i] + 1.5));
    }
    const PdeSolver solver(transport, grid.s);
    const double t1 = 1.0;
    const PdeGrid moved = solver.integrate(grid, t1);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.s.size(); ++i) {
        const double s = grid.s[i];
        if (s < -5.0 + t1 + 0.5 || s > grid.s.back() - 0.1) continue;  // skip inflow shadow
        const double exact = std::exp(-2.0 * (s - t1 + 1.5) * (s - t1 + 1.5));
        worst = std::max(worst, std::abs(moved.g[i] - exact));
    }
    CHECK(worst < 2e-7);

    // Mirrored coefficients move the profile left: g(s,t) = w(s + t).
    const PdeCoeffs mirrored{0.0, 1.0, 0.0, 0.0};
    const PdeSolver solver_left(mirrored, grid.s);
    const PdeGrid moved_left = solver_left.integrate(grid, t1);
    worst = 0.0;
    for (std::size_t i = 0; i < grid.s.size(); ++i) {
        const double s = grid.s[i];
        if (s < -4.5 || s > grid.s.back() - t1 - 0.5) continue;
        const double exact = std::exp(-2.0 * (s + t1 + 1.5) * (s + t1 + 1.5));
        worst = std::max(worst, std::abs(moved_left.g[i] - exact));
    }
    CHECK(worst < 2e-7);
}

TEST_CASE("transport error shrinks at 4th order under refinement") {
    const PdeCoeffs transport{0.0, -1.0, 0.0, 0.0};
    auto run = [&](std::size_t nodes) {
        PdeGrid grid = make_pde_grid(-5.0, 2.0, nodes);
        for (std::size_t i = 0; i < grid.s.size(); ++i) {
            grid.g[i] = std::exp(-2.0 * (grid.s[i] + 1.5) * (grid.s[i] + 1.5));
        }
        OdeOptions opt;
        opt.rtol = 1e-12;   // keep time error below the spatial error
        opt.atol = 1e-14;
        const PdeSolver solver(transport, grid.s, opt);
        const PdeGrid moved = solver.integrate(grid, 0.5);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.s.size(); ++i) {
            const double s = grid.s[i];
            if (s < -3.5 || s > 1.5) continue;
            const double exact = std::exp(-2.0 * (s - 0.5 + 1.5) * (s - 0.5 + 1.5));
            worst = std::max(worst, std::abs(moved.g[i] - exact));
        }
        return worst;
    };
    const double coarse = run(351);
    const double fine = run(701);
    CHECK(coarse / fine >= 8.0);
}

TEST_CASE("between-jump integration matches the gamma-start closed form") {
    const GammaLaw prior{2.0 * kP1.theta, 4.0};
    PdeGrid grid = make_pde_grid(-5.0, default_s_max(4.0), 2001);
    set_gamma_initial(grid, prior);
    const PdeSolver solver(pde_coeffs(kP1), grid.s);

    double t = 0.0;
    for (double t1 : {0.25, 0.5, 1.0}) {
        grid = solver.integrate(grid, t1);
        t = t1;
        const FilterState st = advance(init_filter(kP1, 4.0), t);
        CHECK(max_rel_err_on_band(solver, grid, st, -3.0, 0.0) < 1e-6);
    }
}

TEST_CASE("no-jump posterior rate recovered from the grid to 1e-6") {
    const GammaLaw prior{2.0 * kP1.theta, 4.0};
    PdeGrid grid = make_pde_grid(-5.0, default_s_max(4.0), 2001);
    set_gamma_initial(grid, prior);
    const PdeSolver solver(pde_coeffs(kP1), grid.s);
    grid = solver.integrate(grid, 1.0);

    // Fit the gamma rate via the mean read off the grid: Q = 2 theta / mean.
    const auto& s = grid.s;
    const std::size_t z = grid.zero_index;
    const double h = s[z + 1] - s[z];
    const double mean_pde = (grid.g[z - 2] - 8.0 * grid.g[z - 1] + 8.0 * grid.g[z + 1] -
                             grid.g[z + 2]) /
                            (12.0 * h) / grid.g[z];
    const double rate_pde = 2.0 * kP1.theta / mean_pde;
    const double rate_exact = advance(init_filter(kP1, 4.0), 1.0).rate();
    CHECK(std::abs(rate_pde - rate_exact) / rate_exact < 1e-6);
}

TEST_CASE("jump differentiation restarts the oracle consistently") {
    const GammaLaw prior{2.0 * kP1.theta, 4.0};
    PdeGrid grid = make_pde_grid(-5.0, default_s_max(4.0), 2001);
    set_gamma_initial(grid, prior);
    const PdeSolver solver(pde_coeffs(kP1), grid.s);

    grid = solver.integrate(grid, 1.0);
    grid = solver.apply_jump(grid);
    CHECK(grid.g[grid.zero_index] == 1.0);

    const JumpRecord jumps = make_jump_record({1.0});
    FilterState st = filter_state_at(kP1, 4.0, jumps, 1.0);
    CHECK(max_rel_err_on_band(solver, grid, st, -3.0, 0.0) < 1e-5);

    grid = solver.integrate(grid, 1.8);
    st = filter_state_at(kP1, 4.0, jumps, 1.8);
    CHECK(max_rel_err_on_band(solver, grid, st, -3.0, 0.0) < 1e-5);
}

TEST_CASE("unattainable tolerance raises a step failure") {
    const PdeCoeffs transport{0.0, -1.0, 0.0, 0.0};
    PdeGrid grid = make_pde_grid(-2.0, 1.0, 201);
    for (std::size_t i = 0; i < grid.s.size(); ++i) {
        grid.g[i] = std::exp(-grid.s[i] * grid.s[i]);
    }
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    opt.max_steps = 25;  // starve the controller
    const PdeSolver solver(transport, grid.s, opt);
    CHECK_THROWS_AS(solver.integrate(grid, 5.0), StepFailure);
}

#include "cirfilter/pde_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cirfilter/errors.hpp"

namespace cirfilter {

PdeCoeffs pde_coeffs(const ModelParams& params) {
    return PdeCoeffs{params.mu0 * params.alpha, -1.0, -params.alpha, 0.5 * params.rho};
}

double default_s_max(double rate) { return std::min(0.5 * rate, 2.0); }

PdeGrid make_pde_grid(double s_min, double s_max, std::size_t nodes) {
    if (!(s_min < 0.0) || !(s_max > 0.0) || nodes < 7) {
        throw InvalidGrid("pde grid requires s_min < 0 < s_max and >= 7 nodes");
    }
    const double h0 = (s_max - s_min) / static_cast<double>(nodes - 1);
    // Snap zero onto a node: h = -s_min / j for the j nearest the request.
    auto j = static_cast<std::size_t>(std::lround(-s_min / h0));
    j = std::clamp<std::size_t>(j, 3, nodes - 4);
    const double h = -s_min / static_cast<double>(j);

    PdeGrid grid;
    grid.zero_index = j;
    grid.s.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        grid.s[i] = h * (static_cast<double>(i) - static_cast<double>(j));
    }
    grid.s[j] = 0.0;
    grid.g.assign(nodes, 0.0);
    return grid;
}

void set_gamma_initial(PdeGrid& grid, const GammaLaw& law) {
    grid.t = 0.0;
    for (std::size_t i = 0; i < grid.s.size(); ++i) {
        grid.g[i] = law.mgf(grid.s[i]);
    }
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m) {
    const std::size_t n = nodes.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = std::min<int>(static_cast<int>(i), m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (std::size_t jj = 0; jj < i; ++jj) {
            const double c3 = nodes[i] - nodes[jj];
            c2 *= c3;
            if (jj == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[jj][k] = (c4 * c[jj][k] - k * c[jj][k - 1]) / c3;
            }
            c[jj][0] = c4 * c[jj][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

PdeSolver::PdeSolver(const PdeCoeffs& coeffs, std::vector<double> s_nodes, OdeOptions ode)
    : s_(std::move(s_nodes)), ode_(ode) {
    const std::size_t n = s_.size();
    if (n < 7) throw InvalidGrid("pde solver needs at least 7 nodes");
    for (std::size_t i = 0; i < n; ++i) {
        if (s_[i] == 0.0) zero_index_ = i;
    }

    reaction_.resize(n);
    advection_.resize(n);
    stencil_start_.resize(n);
    stencil_weights_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        reaction_[i] = coeffs.reaction_slope * s_[i];
        advection_[i] = coeffs.advection(s_[i]);

        // Characteristic velocity is -advection; bias the 5-point window
        // against the wind, clamped into the grid.
        const double velocity = -advection_[i];
        long lo;
        if (velocity > 0.0) {
            lo = static_cast<long>(i) - 3;
        } else if (velocity < 0.0) {
            lo = static_cast<long>(i) - 1;
        } else {
            lo = static_cast<long>(i) - 2;
        }
        lo = std::clamp<long>(lo, 0, static_cast<long>(n) - 5);
        stencil_start_[i] = static_cast<std::size_t>(lo);
        const auto w = fd_weights(s_[i], std::span<const double>(s_.data() + lo, 5), 1);
        std::copy_n(w.begin(), 5, stencil_weights_[i].begin());
    }
}

void PdeSolver::rhs(const std::vector<double>& g, std::vector<double>& dgdt) const {
    const std::size_t n = s_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = stencil_start_[i];
        const auto& w = stencil_weights_[i];
        double ds = 0.0;
        for (std::size_t k = 0; k < 5; ++k) {
            ds += w[k] * g[lo + k];
        }
        dgdt[i] = reaction_[i] * g[i] + advection_[i] * ds;
    }
}

PdeGrid PdeSolver::integrate(const PdeGrid& grid, double t1) const {
    if (grid.s != s_) {
        throw InvalidGrid("pde grid does not match the solver's nodes");
    }
    if (!(t1 >= grid.t)) {
        throw TimeRegression("pde integration target precedes grid time");
    }
    PdeGrid out = grid;
    out.g = integrate_dopri5(
        [this](double, const std::vector<double>& y, std::vector<double>& dydt) {
            rhs(y, dydt);
        },
        grid.g, grid.t, t1, ode_);
    out.t = t1;
    return out;
}

PdeGrid PdeSolver::apply_jump(const PdeGrid& grid) const {
    const std::size_t n = s_.size();
    PdeGrid out = grid;
    for (std::size_t i = 0; i < n; ++i) {
        const auto lo = static_cast<std::size_t>(
            std::clamp<long>(static_cast<long>(i) - 2, 0, static_cast<long>(n) - 5));
        const auto w = fd_weights(s_[i], std::span<const double>(s_.data() + lo, 5), 1);
        double ds = 0.0;
        for (std::size_t k = 0; k < 5; ++k) {
            ds += w[k] * grid.g[lo + k];
        }
        out.g[i] = ds;
    }
    const double norm = out.g[zero_index_];
    if (!(norm > 0.0)) {
        throw DegenerateState("pde jump update lost positivity at s = 0");
    }
    for (double& v : out.g) v /= norm;
    return out;
}

double PdeSolver::mgf_at(const PdeGrid& grid, std::size_t node) {
    return grid.g[node] / grid.g[grid.zero_index];
}

}  // namespace cirfilter

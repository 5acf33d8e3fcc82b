#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cirfilter/model.hpp"
#include "cirfilter/ode.hpp"

namespace cirfilter {

/// Transform-domain samples of the unnormalised filter solution g(s, t).
/// The grid always contains s = 0 exactly (index zero_index): g(0, t) is the
/// normaliser, so the mgf read off the grid is g(s,t)/g(0,t).
struct PdeGrid {
    std::vector<double> s;
    std::vector<double> g;
    double t = 0.0;
    std::size_t zero_index = 0;
};

/// Coefficients of the scalar transport equation
///
///   dg/dt = reaction_slope * s * g + (adv0 + adv1 s + adv2 s^2) * dg/ds.
///
/// The model instance is reaction_slope = mu0 alpha and advection
/// (1/2) rho s^2 - alpha s - 1; the all-zero-parameter instance degenerates
/// to dg/dt = -dg/ds.
struct PdeCoeffs {
    double reaction_slope = 0.0;
    double adv0 = 0.0;
    double adv1 = 0.0;
    double adv2 = 0.0;

    double advection(double s) const { return adv0 + s * (adv1 + s * adv2); }
};

PdeCoeffs pde_coeffs(const ModelParams& params);

/// Uniform grid on approximately [s_min, s_max] with s = 0 snapped onto a
/// node. Requires s_min < 0 < s_max and nodes >= 7.
PdeGrid make_pde_grid(double s_min, double s_max, std::size_t nodes);

/// Right grid edge used by default: min(rate/2, 2), safely inside the mgf
/// domain s < rate.
double default_s_max(double rate);

/// Fills g with the Gamma mgf (the t = 0 initial condition).
void set_gamma_initial(PdeGrid& grid, const GammaLaw& law);

/// Fornberg finite-difference weights for the m-th derivative at x0 from
/// arbitrary nodes.
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m);

/// Method-of-lines integrator: 4th-order upwind-biased 5-point differences
/// in s (bias follows the sign of the characteristic velocity -advection),
/// adaptive 5th-order time stepping. Both grid ends are outflow for the
/// model coefficients, so one-sided stencils close the boundary.
class PdeSolver {
  public:
    PdeSolver(const PdeCoeffs& coeffs, std::vector<double> s_nodes, OdeOptions ode = {});

    const std::vector<double>& s_nodes() const { return s_; }
    std::size_t zero_index() const { return zero_index_; }

    /// Advances grid values from grid.t to t1 (no jump inside). Throws
    /// StepFailure if the adaptive controller fails.
    PdeGrid integrate(const PdeGrid& grid, double t1) const;

    /// Observed-jump update: replaces g by its s-derivative (4th-order
    /// central differences), renormalised by the value at s = 0.
    PdeGrid apply_jump(const PdeGrid& grid) const;

    /// g(s_i, t)/g(0, t).
    static double mgf_at(const PdeGrid& grid, std::size_t node);

  private:
    void rhs(const std::vector<double>& g, std::vector<double>& dgdt) const;

    std::vector<double> s_;
    std::size_t zero_index_ = 0;
    std::vector<double> reaction_;
    std::vector<double> advection_;
    std::vector<std::size_t> stencil_start_;
    std::vector<std::array<double, 5>> stencil_weights_;
    OdeOptions ode_;
};

}  // namespace cirfilter

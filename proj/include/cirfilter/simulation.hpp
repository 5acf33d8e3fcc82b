#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cirfilter/model.hpp"

namespace cirfilter {

/// One simulated scenario: intensity sampled on a uniform grid plus the
/// jump times generated from it. `step` is the actual grid step used
/// (the requested step rounded so the grid ends exactly at the horizon).
struct SimPath {
    std::vector<double> grid;
    std::vector<double> intensity;
    JumpRecord jumps;
    std::uint64_t seed = 0;
    double step = 0.0;
};

/// Exact one-step transition of the square-root diffusion, by noncentral
/// chi-square sampling:
///
///   lambda_{t+dt} = c * X,  X ~ chi2'_d(nc),
///   d  = 4 theta,  c = rho (1 - e^{-alpha dt}) / (4 alpha),
///   nc = lambda_t e^{-alpha dt} / c.
///
/// For d >= 1 the draw is (Z + sqrt(nc))^2 + 2 Gamma((d-1)/2); for d < 1 a
/// Poisson-mixed central chi-square 2 Gamma(d/2 + J), J ~ Poisson(nc/2).
/// Either branch is exact, so the path law has no discretisation bias and
/// values are nonnegative by construction.
class CirTransition {
  public:
    explicit CirTransition(const ModelParams& params)
        : params_(params), dof_(4.0 * params.theta) {}

    double step(double lambda, double dt, std::mt19937_64& rng) const;

    double dof() const { return dof_; }

  private:
    ModelParams params_;
    double dof_;
};

/// Uniform grid covering [0, horizon]; throws InvalidGrid unless
/// 0 < step < horizon. The step is shrunk (never grown) so that the grid
/// lands exactly on the horizon.
std::vector<double> make_time_grid(double horizon, double step);

/// Exact-transition path on the grid implied by (horizon, step).
/// Deterministic given seed.
std::vector<double> simulate_cir(const ModelParams& params, double lambda0, double horizon,
                                 double step, std::uint64_t seed);

/// Euler full-truncation scheme on the same grid; biased, kept as a
/// cross-check of the exact sampler.
std::vector<double> simulate_cir_euler(const ModelParams& params, double lambda0,
                                       double horizon, double step, std::uint64_t seed);

/// Jump times of the doubly stochastic Poisson process driven by the given
/// intensity path, by time change: the cumulative hazard (trapezoidal on the
/// grid, linearly inverted within cells) crosses unit-exponential partial
/// sums. Conditional on the path, counts over disjoint intervals are Poisson
/// with the integrated intensity as mean.
JumpRecord simulate_cox_jumps(std::span<const double> grid, std::span<const double> intensity,
                              std::uint64_t seed);

double draw_initial_intensity(const GammaLaw& law, std::mt19937_64& rng);
double draw_initial_intensity(const GammaLaw& law, std::uint64_t seed);

/// Full scenario: lambda0 drawn from `initial_law`, exact path, jumps.
/// Streams 0/1/2 of `seed` drive the initial draw, the path and the jumps.
SimPath simulate_scenario(const ModelParams& params, const GammaLaw& initial_law,
                          double horizon, double step, std::uint64_t seed);

/// Same with a fixed initial intensity.
SimPath simulate_scenario(const ModelParams& params, double lambda0, double horizon,
                          double step, std::uint64_t seed);

}  // namespace cirfilter

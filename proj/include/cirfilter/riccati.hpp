#pragma once

#include "cirfilter/model.hpp"

namespace cirfilter {

/// Deterministic pair (phi(t), psi(t)) giving the Laplace transform of the
/// integrated intensity:
///
///   E[ exp(-int_s^t lambda_u du) | lambda_s ] = exp(-alpha mu0 phi(t-s) - lambda_s psi(t-s))
///
/// with   psi(t) = 2 (1 - e^{-tau t}) / ((tau - alpha) e^{-tau t} + tau + alpha)
///        phi(t) = (2/rho) [ t (tau - alpha)/2 + log1p((tau - alpha)(e^{-tau t} - 1)/(2 tau)) ]
///
/// Both forms are written with e^{-tau t} so they stay finite on arbitrary
/// horizons; phi(0) = psi(0) = 0 exactly. psi is increasing with limit
/// 2/(tau + alpha), phi grows asymptotically linearly.
struct RicattiPair {
    double phi = 0.0;
    double psi = 0.0;
};

/// Evaluates (phi(dt), psi(dt)). Requires dt >= 0.
RicattiPair riccati(double dt, const ModelParams& params);

/// Survival probability over [s, s+dt] given lambda_s, conditional on
/// survival to date:  exp(-alpha mu0 phi(dt) - lambda_s psi(dt)).
/// Indicator handling (whether the name is still alive at s) is the caller's
/// business; this returns the conditional value on that event.
double survival_full_info(double lambda_s, double dt, const ModelParams& params);

}  // namespace cirfilter

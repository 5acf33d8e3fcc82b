#include "cirfilter/riccati.hpp"

#include <cmath>

#include "cirfilter/errors.hpp"

namespace cirfilter {

RicattiPair riccati(double dt, const ModelParams& params) {
    if (!(dt >= 0.0)) {
        throw OutOfDomain("riccati requires dt >= 0");
    }
    const double tau = params.tau;
    const double alpha = params.alpha;

    // em1 = e^{-tau dt} - 1, denominator = (tau - alpha) e^{-tau dt} + tau + alpha.
    const double em1 = std::expm1(-tau * dt);
    const double den = 2.0 * tau + (tau - alpha) * em1;

    RicattiPair out;
    out.psi = -2.0 * em1 / den;
    out.phi = (2.0 / params.rho) *
              (0.5 * dt * (tau - alpha) + std::log1p((tau - alpha) * em1 / (2.0 * tau)));
    return out;
}

double survival_full_info(double lambda_s, double dt, const ModelParams& params) {
    if (!(lambda_s >= 0.0)) {
        throw OutOfDomain("survival_full_info requires lambda_s >= 0");
    }
    const RicattiPair r = riccati(dt, params);
    return std::exp(-params.alpha * params.mu0 * r.phi - lambda_s * r.psi);
}

}  // namespace cirfilter

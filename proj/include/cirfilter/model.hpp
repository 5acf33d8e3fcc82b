#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cirfilter/errors.hpp"

namespace cirfilter {

/// Coefficients of the square-root intensity model
///
///     d lambda_t = -alpha (lambda_t - mu0) dt + beta sqrt(lambda_t) dW_t
///
/// together with the derived constants used throughout:
///     rho   = beta^2
///     tau   = sqrt(alpha^2 + 2 beta^2)
///     theta = mu0 alpha / rho
///
/// Derived values are computed once at construction and stored, so every
/// module sees bitwise-identical constants.
struct ModelParams {
    double alpha = 0.0;
    double mu0 = 0.0;
    double beta = 0.0;

    double rho = 0.0;
    double tau = 0.0;
    double theta = 0.0;

    /// alpha*mu0 >= beta^2/2: the intensity path stays strictly positive.
    /// Violation is allowed (the filter stays well defined) but recorded.
    bool strictly_positive = false;
};

/// Throws NonPositiveParameter unless alpha, mu0, beta are all finite and > 0.
ModelParams make_params(double alpha, double mu0, double beta);

/// Gamma distribution in the shape/rate convention:
///   mean = shape/rate,  mgf(s) = (rate/(rate - s))^shape for s < rate.
///
/// The shape/rate convention (rather than shape/scale) is fixed project-wide;
/// it is the one under which the initial law Gamma(2*theta, phi) has
/// mgf(s) = (phi/(phi - s))^(2*theta).
struct GammaLaw {
    double shape = 1.0;
    double rate = 1.0;

    double mean() const { return shape / rate; }
    double variance() const { return shape / (rate * rate); }
    double mgf(double s) const;  // throws OutOfDomain when s >= rate
    double pdf(double x) const;
    double cdf(double x) const;
};

GammaLaw make_gamma_law(double shape, double rate);

/// Observed jump times T_1 < T_2 < ..., all strictly positive.
/// T_0 = 0 is implicit and never stored.
struct JumpRecord {
    std::vector<double> times;

    std::size_t count() const { return times.size(); }
    bool empty() const { return times.empty(); }
};

/// Validates ordering/positivity; throws NonMonotoneJumps.
JumpRecord make_jump_record(std::vector<double> times);

/// Raw user-facing parameter block: model coefficients plus the initial
/// Gamma rate phi (the initial law is Gamma(2*theta, phi)).
struct RawParams {
    double alpha = 0.0;
    double mu0 = 0.0;
    double beta = 0.0;
    double phi = 0.0;
};

struct ValidatedModel {
    ModelParams params;
    GammaLaw initial_law;  // Gamma(2*theta, phi)
};

ValidatedModel validate_params(const RawParams& raw);

void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);
void to_json(nlohmann::json& j, const RawParams& p);
void from_json(const nlohmann::json& j, RawParams& p);

}  // namespace cirfilter

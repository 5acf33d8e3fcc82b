#include "cirfilter/model.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

namespace cirfilter {

namespace {

void require_positive(double value, const char* field) {
    if (!(std::isfinite(value) && value > 0.0)) {
        throw NonPositiveParameter(field);
    }
}

}  // namespace

ModelParams make_params(double alpha, double mu0, double beta) {
    require_positive(alpha, "alpha");
    require_positive(mu0, "mu0");
    require_positive(beta, "beta");

    ModelParams p;
    p.alpha = alpha;
    p.mu0 = mu0;
    p.beta = beta;
    p.rho = beta * beta;
    p.tau = std::sqrt(alpha * alpha + 2.0 * beta * beta);
    p.theta = mu0 * alpha / p.rho;
    p.strictly_positive = alpha * mu0 >= 0.5 * beta * beta;
    return p;
}

double GammaLaw::mgf(double s) const {
    if (!(s < rate)) {
        throw OutOfDomain("Gamma mgf argument must satisfy s < rate");
    }
    return std::pow(rate / (rate - s), shape);
}

double GammaLaw::pdf(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) {
        if (shape > 1.0) return 0.0;
        if (shape == 1.0) return rate;
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                    std::lgamma(shape));
}

double GammaLaw::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(shape, rate * x);
}

GammaLaw make_gamma_law(double shape, double rate) {
    require_positive(shape, "shape");
    require_positive(rate, "rate");
    return GammaLaw{shape, rate};
}

JumpRecord make_jump_record(std::vector<double> times) {
    double previous = 0.0;  // implicit T_0
    for (double t : times) {
        if (!(std::isfinite(t) && t > previous)) {
            throw NonMonotoneJumps("jump times must be finite, positive and strictly increasing");
        }
        previous = t;
    }
    return JumpRecord{std::move(times)};
}

ValidatedModel validate_params(const RawParams& raw) {
    ModelParams params = make_params(raw.alpha, raw.mu0, raw.beta);
    require_positive(raw.phi, "phi");
    return ValidatedModel{params, GammaLaw{2.0 * params.theta, raw.phi}};
}

void to_json(nlohmann::json& j, const ModelParams& p) {
    j = nlohmann::json{{"alpha", p.alpha}, {"mu0", p.mu0}, {"beta", p.beta}};
}

void from_json(const nlohmann::json& j, ModelParams& p) {
    p = make_params(j.at("alpha").get<double>(), j.at("mu0").get<double>(),
                    j.at("beta").get<double>());
}

void to_json(nlohmann::json& j, const RawParams& p) {
    j = nlohmann::json{{"alpha", p.alpha}, {"mu0", p.mu0}, {"beta", p.beta}, {"phi", p.phi}};
}

void from_json(const nlohmann::json& j, RawParams& p) {
    p.alpha = j.at("alpha").get<double>();
    p.mu0 = j.at("mu0").get<double>();
    p.beta = j.at("beta").get<double>();
    p.phi = j.at("phi").get<double>();
}

}  // namespace cirfilter

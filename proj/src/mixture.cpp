#include "cirfilter/mixture.hpp"

#include <cmath>

#include "cirfilter/errors.hpp"

namespace cirfilter {

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    if (n <= 20) {
        unsigned long long num = 1;
        for (std::size_t i = 0; i < std::min(k, n - k); ++i) {
            num = num * (n - i) / (i + 1);
        }
        return static_cast<double>(num);
    }
    return std::exp(std::lgamma(static_cast<double>(n + 1)) -
                    std::lgamma(static_cast<double>(k + 1)) -
                    std::lgamma(static_cast<double>(n - k + 1)));
}

GammaMixture mixture_from_state(const FilterState& state) {
    const poly::Coeffs r = interval_polynomial(state);
    const std::size_t n = state.n();
    const double q_rate = state.rate();

    GammaMixture mix;
    mix.n = n;
    mix.rate = q_rate;
    mix.weights.assign(n + 1, 0.0);
    mix.shapes.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        mix.shapes[i] = 2.0 * state.params.theta + static_cast<double>(n - i);
    }

    // Back-substitution from the top coefficient down.
    double rate_pow = std::pow(q_rate, static_cast<double>(n));
    for (std::size_t j = n + 1; j-- > 0;) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        double w = sign * r[j] * rate_pow;
        for (std::size_t i = j + 1; i <= n; ++i) {
            w -= binomial(i, j) * mix.weights[i];
        }
        mix.weights[j] = w;
        rate_pow /= q_rate;
        if (w < -1e-12) mix.weights_nonnegative = false;
    }
    return mix;
}

double mixture_mgf(const GammaMixture& mix, double s) {
    if (!(s < mix.rate)) {
        throw OutOfDomain("mixture mgf requires s < rate");
    }
    const double base = mix.rate / (mix.rate - s);
    double acc = 0.0;
    for (std::size_t i = 0; i <= mix.n; ++i) {
        acc += mix.weights[i] * std::pow(base, mix.shapes[i]);
    }
    return acc;
}

double mixture_pdf(const GammaMixture& mix, double x) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= mix.n; ++i) {
        acc += mix.weights[i] * GammaLaw{mix.shapes[i], mix.rate}.pdf(x);
    }
    return acc;
}

double mixture_cdf(const GammaMixture& mix, double x) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= mix.n; ++i) {
        acc += mix.weights[i] * GammaLaw{mix.shapes[i], mix.rate}.cdf(x);
    }
    return acc;
}

double mixture_mean(const GammaMixture& mix) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= mix.n; ++i) {
        acc += mix.weights[i] * mix.shapes[i];
    }
    return acc / mix.rate;
}

double mixture_second_moment(const GammaMixture& mix) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= mix.n; ++i) {
        acc += mix.weights[i] * mix.shapes[i] * (mix.shapes[i] + 1.0);
    }
    return acc / (mix.rate * mix.rate);
}

}  // namespace cirfilter

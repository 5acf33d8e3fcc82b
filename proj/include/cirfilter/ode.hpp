#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cirfilter/errors.hpp"

namespace cirfilter {

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0: pick from the span
    double safety = 0.9;
    std::size_t max_steps = 20'000'000;
};

/// Adaptive Dormand-Prince 5(4) on a vector state. The callable has
/// signature f(t, y, dydt). Throws StepFailure when the controller cannot
/// meet the local tolerance. Returns y(t1).
template <class Rhs>
std::vector<double> integrate_dopri5(Rhs&& f, std::vector<double> y, double t0, double t1,
                                     const OdeOptions& opt = {}) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 5th-minus-4th order error weights.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = t1 - t0;
    if (span == 0.0) return y;
    const std::size_t dim = y.size();

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    std::vector<double> tmp(dim), y_new(dim);

    double t = t0;
    double h = opt.initial_step > 0.0 ? opt.initial_step : span / 100.0;
    h = std::min(h, span);
    const double h_floor = std::abs(span) * 1e-14;

    f(t, y, k1);  // FSAL: k1 is reused from the previous step's k7
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (t + h > t1) h = t1 - t;

        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                 a65 * k5[i]);
        f(t + h, tmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                   b6 * k6[i]);
        f(t + h, y_new, k7);

        double err_sq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double ratio = err / scale;
            err_sq += ratio * ratio;
        }
        const double err_norm = std::sqrt(err_sq / static_cast<double>(dim));

        if (err_norm <= 1.0 || !(std::isfinite(err_norm))) {
            if (!std::isfinite(err_norm)) {
                // Blow-up inside a stage: retry with a smaller step.
                h *= 0.25;
                if (h < h_floor) throw StepFailure("ode step underflow (non-finite stages)");
                continue;
            }
            t += h;
            y.swap(y_new);
            k1.swap(k7);
            if (t >= t1) return y;
        }
        const double factor = opt.safety * std::pow(std::max(err_norm, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < h_floor) {
            throw StepFailure("ode controller could not meet the local tolerance");
        }
    }
    throw StepFailure("ode step budget exhausted");
}

}  // namespace cirfilter

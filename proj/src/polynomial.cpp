#include "cirfilter/polynomial.hpp"

#include <cassert>
#include <cmath>

namespace cirfilter::poly {

double eval(const Coeffs& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

double eval_compensated(const Coeffs& c, double x) {
    // Horner with TwoProd/TwoSum error terms accumulated in a parallel sum.
    double acc = 0.0;
    double err = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        const double p = acc * x;
        const double p_err = std::fma(acc, x, -p);
        const double s = p + *it;
        const double s_err = (std::abs(p) >= std::abs(*it)) ? (p - s) + *it : (*it - s) + p;
        acc = s;
        err = err * x + (p_err + s_err);
    }
    return acc + err;
}

double eval_auto(const Coeffs& c, double x) {
    return c.size() <= 31 ? eval(c, x) : eval_compensated(c, x);
}

Coeffs derivative(const Coeffs& c) {
    if (c.size() <= 1) return {};
    Coeffs d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) {
        d[k - 1] = static_cast<double>(k) * c[k];
    }
    return d;
}

Coeffs multiply(const Coeffs& a, const Coeffs& b) {
    if (a.empty() || b.empty()) return {};
    Coeffs r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

int degree(const Coeffs& c, double tol) {
    for (std::size_t k = c.size(); k-- > 0;) {
        if (std::abs(c[k]) > tol) return static_cast<int>(k);
    }
    return -1;
}

Coeffs compose_linear_fraction(const Coeffs& h, std::size_t power, double n0, double n1,
                               double d0, double d1) {
    assert(h.size() <= power + 1);
    const Coeffs num = {n0, n1};
    const Coeffs den = {d0, d1};

    // Power tables up to `power`; exact coefficient algebra, no interpolation.
    std::vector<Coeffs> num_pow(power + 1), den_pow(power + 1);
    num_pow[0] = {1.0};
    den_pow[0] = {1.0};
    for (std::size_t k = 1; k <= power; ++k) {
        num_pow[k] = multiply(num_pow[k - 1], num);
        den_pow[k] = multiply(den_pow[k - 1], den);
    }

    Coeffs out(power + 1, 0.0);
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (h[k] == 0.0) continue;
        const Coeffs term = multiply(num_pow[k], den_pow[power - k]);
        for (std::size_t i = 0; i < term.size(); ++i) {
            out[i] += h[k] * term[i];
        }
    }
    return out;
}

}  // namespace cirfilter::poly

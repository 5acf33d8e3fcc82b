#pragma once

#include <cstddef>
#include <vector>

namespace cirfilter::poly {

/// Dense monomial-basis coefficients, lowest degree first.
using Coeffs = std::vector<double>;

/// Horner evaluation. eval({}, x) == 0.
double eval(const Coeffs& c, double x);

/// Compensated Horner (error-free transformations); used for high degrees
/// where plain Horner starts losing digits.
double eval_compensated(const Coeffs& c, double x);

/// Plain Horner up to degree 30, compensated above.
double eval_auto(const Coeffs& c, double x);

Coeffs derivative(const Coeffs& c);

Coeffs multiply(const Coeffs& a, const Coeffs& b);

/// Index of the highest coefficient with |c_k| > tol, or -1 for the zero
/// polynomial.
int degree(const Coeffs& c, double tol = 0.0);

/// Expands  sum_k h_k (n0 + n1 s)^k (d0 + d1 s)^(power - k)  exactly on
/// coefficient vectors. This is the polynomial obtained when h of degree
/// <= power is composed with the linear-fractional map
/// s -> (n0 + n1 s)/(d0 + d1 s) and cleared of its denominator.
/// Requires h.size() <= power + 1; the result has power + 1 coefficients.
Coeffs compose_linear_fraction(const Coeffs& h, std::size_t power, double n0, double n1,
                               double d0, double d1);

}  // namespace cirfilter::poly

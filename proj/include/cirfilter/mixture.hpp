#pragma once

#include <cstddef>
#include <vector>

#include "cirfilter/filter.hpp"

namespace cirfilter {

/// Posterior after n jumps written as a mixture of n+1 Gamma laws sharing the
/// rate Q(t) with shapes 2 theta + n - i, i = 0..n:
///
///   f(s,t) = sum_i pi_i (Q/(Q-s))^(2 theta + n - i).
///
/// The weights always sum to one (forced by q_n(0,t) = 1). Nonnegativity of
/// every weight is an observed property, not a proven one: it is monitored
/// through `weights_nonnegative` (tolerance -1e-12) and never clamped.
struct GammaMixture {
    std::size_t n = 0;
    double rate = 0.0;
    std::vector<double> weights;  // pi_0 .. pi_n
    std::vector<double> shapes;   // 2 theta + n - i
    bool weights_nonnegative = true;
};

/// Reads the coefficients R_i of the normalised interval polynomial
/// q_n(s,t) = sum_i R_i s^i and back-solves, from j = n down to 0,
///
///   pi_j = (-1)^j R_j Q^j - sum_{i>j} binom(i, j) pi_i.
GammaMixture mixture_from_state(const FilterState& state);

/// Weighted sum of Gamma mgfs; domain s < rate.
double mixture_mgf(const GammaMixture& mix, double s);

double mixture_pdf(const GammaMixture& mix, double x);
double mixture_cdf(const GammaMixture& mix, double x);

double mixture_mean(const GammaMixture& mix);
double mixture_second_moment(const GammaMixture& mix);

/// Binomial coefficient as a double: exact integer arithmetic for n <= 20,
/// log-gamma above (overflow-safe, error negligible at the sizes used).
double binomial(std::size_t n, std::size_t k);

}  // namespace cirfilter

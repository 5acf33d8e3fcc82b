#pragma once

#include <cstddef>
#include <vector>

#include "cirfilter/model.hpp"
#include "cirfilter/polynomial.hpp"

namespace cirfilter {

/// The three propagation kernels of the closed-form filter. With
/// e = e^{-tau t}:
///
///   A(x,t,y) = x ((tau - alpha) e + tau + alpha) + 2 y (1 - e)
///   B(s,t)   = rho s (e - 1) + (tau - alpha) e + tau + alpha
///   C(x,t,y) = y ((alpha + tau) e + tau - alpha) + rho x (1 - e)
///
/// At t = 0:  A = 2 tau x, B = 2 tau, C = 2 tau y. The pair (A, C) is a
/// linear flow in (x, y) that composes up to the harmless scale 2 tau:
/// M(a) M(b) = 2 tau M(a + b).
double abc_a(double x, double t, double y, const ModelParams& params);
double abc_b(double s, double t, const ModelParams& params);
double abc_c(double x, double t, double y, const ModelParams& params);

/// Full posterior summary of the unobserved intensity given the jump history
/// up to time t. With n observed jumps the conditional law has moment
/// generating function
///
///   f(s,t) = q_n(s,t) * (Q / (Q - s))^(2 theta + n),   Q = script_a/script_c,
///
/// where q_n is a degree-n polynomial with q_n(0,t) = 1. The state stores
/// only jump-time data: the kernel pair evaluated at the last jump
/// (snapshot_a/c, the (x,y) arguments of the current interval's flow) and the
/// normalised polynomial at the last jump time (poly_snapshot, n+1
/// coefficients). The current-interval polynomial is recovered lazily from
/// the snapshot for any queried t, which keeps advance O(1).
///
/// The unnormalised solution also carries a jump-history prefactor that is
/// independent of s; it cancels in f = g(s,t)/g(0,t) and is never computed
/// (the reference intensity is notionally the constant 1).
///
/// States are immutable values: advance/jump_update return new states.
struct FilterState {
    ModelParams params;
    double phi0 = 0.0;  // rate of the Gamma(2 theta, phi0) initial law

    double t = 0.0;
    JumpRecord jumps;

    double script_a = 0.0;  // kernel A evaluated at (snapshot, t - T_n)
    double script_c = 0.0;  // kernel C evaluated at (snapshot, t - T_n)
    double snapshot_a = 0.0;
    double snapshot_c = 0.0;
    poly::Coeffs poly_snapshot;  // q_n(., T_n), constant coefficient 1

    std::size_t n() const { return jumps.count(); }
    double last_jump_time() const { return jumps.empty() ? 0.0 : jumps.times.back(); }
    /// Q(t) = script_a / script_c, the common rate of the posterior mixture.
    double rate() const { return script_a / script_c; }
    /// 2 theta + n, the leading shape of the posterior mixture.
    double shape() const { return 2.0 * params.theta + static_cast<double>(n()); }
};

/// State at t = 0: posterior is the Gamma(2 theta, phi) prior itself,
/// q_0 = 1, snapshot (phi, 1), so Q(0) = phi.
FilterState init_filter(const ModelParams& params, double phi);

/// Propagates to new_t assuming no jump in (state.t, new_t]. Throws
/// TimeRegression when new_t < state.t. Recomputes the kernels from the
/// jump-time snapshot, so advancing in one hop or several is bitwise
/// identical.
FilterState advance(const FilterState& state, double new_t);

/// Registers an observed jump at the current time. The posterior polynomial
/// updates through
///
///   H(s) = (2 theta + n) script_c * u(s) + u'(s) (script_a - s script_c),
///
/// with u the current-interval polynomial, and is renormalised so its
/// constant coefficient is 1 (only the ratio q = p / p(0) ever enters f).
/// The new snapshot pair is the kernel values at the jump time. Throws
/// TimeRegression for a jump not strictly after the previous one,
/// DegenerateState if the normalising value is not positive.
FilterState jump_update(const FilterState& state);

/// Normalised current-interval polynomial q_n(., state.t).
poly::Coeffs interval_polynomial(const FilterState& state);

/// f(s, t) = E[e^{s lambda_t} | jump history]. Domain s < rate(); f(0) = 1
/// exactly. Throws OutOfDomain otherwise.
double conditional_mgf(const FilterState& state, double s);

/// d/ds f(s, t); same domain as conditional_mgf.
double conditional_mgf_derivative(const FilterState& state, double s);

/// E[lambda_t | jump history] = q'(0) + (2 theta + n)/Q. Analytic, no
/// finite differences.
double conditional_mean(const FilterState& state);

/// E[lambda_t^2 | jump history] = q''(0) + 2 q'(0) k/Q + k(k+1)/Q^2,
/// k = 2 theta + n.
double conditional_second_moment(const FilterState& state);

/// P(no jump in (t, t+dt] | jump history) on the event of survival to t:
/// exp(-alpha mu0 phi(dt)) * f(-psi(dt), t). Always in (0, 1].
double conditional_survival(const FilterState& state, double dt);

/// Constant-intensity filter: prior Gamma(a, b), n observed jumps by time t
/// give posterior Gamma(a + n, b + t), so the conditional mgf is
/// ((b+t)/(b+t-s))^(a+n). Jump-time values do not enter. Domain s < b + t.
double toy_filter_mgf(double a, double b, double t, std::size_t n, double s);

/// Convenience: runs init/advance/jump_update through every jump with
/// T <= t and advances to t (the jump at t, if any, is applied).
FilterState filter_state_at(const ModelParams& params, double phi, const JumpRecord& jumps,
                            double t);

}  // namespace cirfilter

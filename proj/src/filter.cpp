#include "cirfilter/filter.hpp"

#include <cmath>
#include <utility>

#include "cirfilter/errors.hpp"
#include "cirfilter/riccati.hpp"

namespace cirfilter {

double abc_a(double x, double t, double y, const ModelParams& p) {
    const double e = std::exp(-p.tau * t);
    return x * ((p.tau - p.alpha) * e + p.tau + p.alpha) + 2.0 * y * (1.0 - e);
}

double abc_b(double s, double t, const ModelParams& p) {
    const double e = std::exp(-p.tau * t);
    return p.rho * s * (e - 1.0) + (p.tau - p.alpha) * e + p.tau + p.alpha;
}

double abc_c(double x, double t, double y, const ModelParams& p) {
    const double e = std::exp(-p.tau * t);
    return y * ((p.alpha + p.tau) * e + p.tau - p.alpha) + p.rho * x * (1.0 - e);
}

namespace {

void refresh_scripts(FilterState& st) {
    const double dt = st.t - st.last_jump_time();
    st.script_a = abc_a(st.snapshot_a, dt, st.snapshot_c, st.params);
    st.script_c = abc_c(st.snapshot_a, dt, st.snapshot_c, st.params);
    if (!(st.script_a > 0.0) || !(st.script_c > 0.0)) {
        throw DegenerateState("filter kernels must stay positive");
    }
}

}  // namespace

FilterState init_filter(const ModelParams& params, double phi) {
    if (!(std::isfinite(phi) && phi > 0.0)) {
        throw NonPositiveParameter("phi");
    }
    FilterState st;
    st.params = params;
    st.phi0 = phi;
    st.t = 0.0;
    st.snapshot_a = phi;
    st.snapshot_c = 1.0;
    st.poly_snapshot = {1.0};
    refresh_scripts(st);
    return st;
}

FilterState advance(const FilterState& state, double new_t) {
    if (!(new_t >= state.t)) {
        throw TimeRegression("advance target precedes current filter time");
    }
    FilterState st = state;
    st.t = new_t;
    refresh_scripts(st);
    return st;
}

poly::Coeffs interval_polynomial(const FilterState& state) {
    const std::size_t n = state.n();
    if (n == 0) return {1.0};

    const double dt = state.t - state.last_jump_time();
    const ModelParams& p = state.params;
    const double e = std::exp(-p.tau * dt);

    // q_n(s, t) is the jump-time snapshot composed with the linear-fractional
    // map s -> N(s)/D(s) and cleared of the denominator:
    //   N(s) = C(-2/rho, dt, s) = s ((alpha+tau) e + tau - alpha) - 2 (1 - e)
    //   D(s) = B(s, dt)         = rho s (e - 1) + (tau - alpha) e + tau + alpha
    const double n0 = 2.0 * (e - 1.0);
    const double n1 = (p.alpha + p.tau) * e + p.tau - p.alpha;
    const double d0 = (p.tau - p.alpha) * e + p.tau + p.alpha;
    const double d1 = p.rho * (e - 1.0);

    poly::Coeffs q = poly::compose_linear_fraction(state.poly_snapshot, n, n0, n1, d0, d1);
    if (!(q[0] > 0.0)) {
        throw DegenerateState("interval polynomial lost its normalising value");
    }
    const double inv = 1.0 / q[0];
    for (double& c : q) c *= inv;
    q[0] = 1.0;
    return q;
}

FilterState jump_update(const FilterState& state) {
    if (!(state.t > state.last_jump_time())) {
        throw TimeRegression("jump times must be strictly increasing");
    }
    const poly::Coeffs u = interval_polynomial(state);
    const poly::Coeffs du = poly::derivative(u);
    const double k = state.shape();  // 2 theta + n

    poly::Coeffs h(state.n() + 2, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        h[i] += k * state.script_c * u[i];
    }
    if (!du.empty()) {
        const poly::Coeffs tilt = poly::multiply(du, {state.script_a, -state.script_c});
        for (std::size_t i = 0; i < tilt.size(); ++i) {
            h[i] += tilt[i];
        }
    }
    if (!(h[0] > 0.0)) {
        throw DegenerateState("jump update produced a non-positive normalising value");
    }
    const double inv = 1.0 / h[0];
    for (double& c : h) c *= inv;
    h[0] = 1.0;

    FilterState st = state;
    st.jumps.times.push_back(state.t);
    st.snapshot_a = state.script_a;
    st.snapshot_c = state.script_c;
    st.poly_snapshot = std::move(h);
    refresh_scripts(st);
    return st;
}

double conditional_mgf(const FilterState& state, double s) {
    const double q_rate = state.rate();
    if (!(s < q_rate)) {
        throw OutOfDomain("conditional mgf requires s < Q(t)");
    }
    const poly::Coeffs q = interval_polynomial(state);
    return poly::eval_auto(q, s) * std::pow(q_rate / (q_rate - s), state.shape());
}

double conditional_mgf_derivative(const FilterState& state, double s) {
    const double q_rate = state.rate();
    if (!(s < q_rate)) {
        throw OutOfDomain("conditional mgf requires s < Q(t)");
    }
    const poly::Coeffs q = interval_polynomial(state);
    const poly::Coeffs dq = poly::derivative(q);
    const double power = std::pow(q_rate / (q_rate - s), state.shape());
    return (poly::eval_auto(dq, s) +
            poly::eval_auto(q, s) * state.shape() / (q_rate - s)) *
           power;
}

double conditional_mean(const FilterState& state) {
    const poly::Coeffs q = interval_polynomial(state);
    const double slope = q.size() > 1 ? q[1] : 0.0;
    return slope + state.shape() / state.rate();
}

double conditional_second_moment(const FilterState& state) {
    const poly::Coeffs q = interval_polynomial(state);
    const double q1 = q.size() > 1 ? q[1] : 0.0;
    const double q2 = q.size() > 2 ? 2.0 * q[2] : 0.0;
    const double k = state.shape();
    const double q_rate = state.rate();
    return q2 + 2.0 * q1 * k / q_rate + k * (k + 1.0) / (q_rate * q_rate);
}

double conditional_survival(const FilterState& state, double dt) {
    const RicattiPair r = riccati(dt, state.params);
    return std::exp(-state.params.alpha * state.params.mu0 * r.phi) *
           conditional_mgf(state, -r.psi);
}

double toy_filter_mgf(double a, double b, double t, std::size_t n, double s) {
    if (!(a > 0.0)) throw NonPositiveParameter("a");
    if (!(b > 0.0)) throw NonPositiveParameter("b");
    if (!(t >= 0.0)) throw OutOfDomain("toy filter requires t >= 0");
    const double rate = b + t;
    if (!(s < rate)) {
        throw OutOfDomain("toy filter mgf requires s < b + t");
    }
    return std::pow(rate / (rate - s), a + static_cast<double>(n));
}

FilterState filter_state_at(const ModelParams& params, double phi, const JumpRecord& jumps,
                            double t) {
    FilterState st = init_filter(params, phi);
    for (double jump_time : jumps.times) {
        if (jump_time > t) break;
        st = jump_update(advance(st, jump_time));
    }
    return advance(st, t);
}

}  // namespace cirfilter

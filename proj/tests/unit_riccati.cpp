#include <doctest.h>

#include <cmath>
#include <vector>

#include "cirfilter/model.hpp"
#include "cirfilter/ode.hpp"
#include "cirfilter/riccati.hpp"
#include "support/test_oracles.hpp"

using namespace cirfilter;

namespace {

const ModelParams kP1 = make_params(0.5, 0.4, 0.5);
const ModelParams kP2 = make_params(1.2, 0.25, 0.4);
const ModelParams kP3 = make_params(0.5, 0.1, 0.5);

// Integrates phi' = psi, psi' = 1 - alpha psi - (beta^2/2) psi^2 from (0,0);
// an oracle for the closed forms that never touches them.
RicattiPair riccati_by_ode(double dt, const ModelParams& p) {
    if (dt == 0.0) return {0.0, 0.0};
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    auto rhs = [&p](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = 1.0 - p.alpha * y[1] - 0.5 * p.beta * p.beta * y[1] * y[1];
    };
    const auto y = integrate_dopri5(rhs, {0.0, 0.0}, 0.0, dt, opt);
    return {y[0], y[1]};
}

}  // namespace

TEST_CASE("riccati values frozen from extended-precision evaluation") {
    RicattiPair r = riccati(1.0, kP1);
    CHECK(r.phi == doctest::Approx(0.4192457633616339).epsilon(1e-13));
    CHECK(r.psi == doctest::Approx(0.7623505879116817).epsilon(1e-13));

    r = riccati(0.25, kP1);
    CHECK(r.phi == doctest::Approx(0.02995083838047162).epsilon(1e-13));
    CHECK(r.psi == doctest::Approx(0.2344329045660684).epsilon(1e-13));

    r = riccati(2.5, kP1);
    CHECK(r.phi == doctest::Approx(2.003304032115057).epsilon(1e-13));
    CHECK(r.psi == doctest::Approx(1.257446283156554).epsilon(1e-13));

    r = riccati(0.7, kP2);
    CHECK(r.phi == doctest::Approx(0.1878499228333014).epsilon(1e-13));
    CHECK(r.psi == doctest::Approx(0.4695293981277899).epsilon(1e-13));

    r = riccati(2.0, kP3);
    CHECK(r.phi == doctest::Approx(1.399529184707145).epsilon(1e-13));
    CHECK(r.psi == doctest::Approx(1.150529128877811).epsilon(1e-13));
}

TEST_CASE("riccati is exactly zero at dt = 0 and rejects dt < 0") {
    const RicattiPair r = riccati(0.0, kP1);
    CHECK(r.phi == 0.0);
    CHECK(r.psi == 0.0);
    CHECK_THROWS_AS(riccati(-1e-9, kP1), OutOfDomain);
}

TEST_CASE("psi saturates at 2/(tau + alpha), phi keeps growing") {
    for (const ModelParams& p : {kP1, kP2, kP3}) {
        const double limit = 2.0 / (p.tau + p.alpha);
        CHECK(std::abs(riccati(50.0, p).psi - limit) < 1e-8);
        CHECK(std::abs(riccati(5000.0, p).psi - limit) < 1e-12);
        CHECK(std::isfinite(riccati(5000.0, p).phi));
        CHECK(riccati(5000.0, p).phi > riccati(50.0, p).phi);
    }
    // Frozen large-horizon value: no overflow on long spans.
    CHECK(riccati(50.0, kP1).phi == doctest::Approx(71.30587446767478).epsilon(1e-12));
}

TEST_CASE("closed forms agree with the ode oracle") {
    for (const ModelParams& p : {kP1, kP2, kP3}) {
        for (double dt : {0.1, 0.5, 1.0, 2.0, 3.7, 5.0}) {
            const RicattiPair closed = riccati(dt, p);
            const RicattiPair ode = riccati_by_ode(dt, p);
            CHECK(closed.phi == doctest::Approx(ode.phi).epsilon(1e-9));
            CHECK(closed.psi == doctest::Approx(ode.psi).epsilon(1e-9));
        }
    }
}

TEST_CASE("phi and psi are nondecreasing and bounded") {
    for (const ModelParams& p : {kP1, kP2, kP3}) {
        const double bound = 2.0 / (p.tau + p.alpha);
        double prev_phi = 0.0;
        double prev_psi = 0.0;
        for (double dt = 0.05; dt <= 10.0; dt += 0.05) {
            const RicattiPair r = riccati(dt, p);
            CHECK(r.phi >= prev_phi);
            CHECK(r.psi >= prev_psi);
            CHECK(r.psi <= bound * (1.0 + 1e-12));
            prev_phi = r.phi;
            prev_psi = r.psi;
        }
    }
}

TEST_CASE("survival transform: boundary values, monotonicity, frozen value") {
    CHECK(survival_full_info(0.7, 0.0, kP1) == 1.0);
    CHECK(survival_full_info(0.0, 0.0, kP1) == 1.0);

    const RicattiPair r1 = riccati(1.0, kP1);
    CHECK(survival_full_info(0.4, 1.0, kP1) ==
          doctest::Approx(std::exp(-0.2 * r1.phi - 0.4 * r1.psi)).epsilon(1e-15));

    double prev = 1.0;
    for (double dt = 0.1; dt < 6.0; dt += 0.1) {
        const double s = survival_full_info(0.4, dt, kP1);
        CHECK(s > 0.0);
        CHECK(s <= prev);
        prev = s;
    }
    CHECK_THROWS_AS(survival_full_info(-0.1, 1.0, kP1), OutOfDomain);
}

TEST_CASE("transform solves the pricing pde in time") {
    // d/dt exp(-alpha mu0 phi - lambda psi) must equal the generator part
    // (alpha lambda psi - alpha mu0 psi + rho lambda psi^2 / 2 - lambda) u.
    for (const ModelParams& p : {kP1, kP2, kP3}) {
        for (double lambda : {0.0, 0.2, 0.9}) {
            auto u = [&](double t) {
                const RicattiPair r = riccati(t, p);
                return std::exp(-p.alpha * p.mu0 * r.phi - lambda * r.psi);
            };
            for (double t = 0.25; t <= 5.0; t += 0.25) {
                const double lhs = testsupport::fd_derivative(u, t, 1e-3);
                const RicattiPair r = riccati(t, p);
                const double rhs = (p.alpha * lambda * r.psi - p.alpha * p.mu0 * r.psi +
                                    0.5 * p.rho * lambda * r.psi * r.psi - lambda) *
                                   u(t);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
            }
        }
    }
}

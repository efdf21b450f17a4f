#include "carleman/weights.hpp"
#include "carleman/numeric.hpp"

#include "doctest.h"
#include "fd_oracle.hpp"

#include <cmath>
#include <random>

using namespace carleman;
using carleman::testing::fd_derivative;
using carleman::testing::rel_close;

namespace {

std::vector<Point> sample_points(int count, unsigned seed = 0, double t_hi = 0.0) {
    HaltonSequence seq(3, seed);
    auto pts = seq.box(count, 0.05, 0.95);
    for (auto& p : pts) p[2] *= t_hi / 0.95;
    return pts;
}

} // namespace

TEST_CASE("degenerate psi == 0 gives r == e for s = 1") {
    WeightSpec spec;
    spec.s = 1.0;
    spec.psi_c = 0.0;
    spec.psi_a = {0.0, 0.0};
    spec.psi_b = {0.0, 0.0};
    auto w = make_weights(spec);
    for (const auto& p : sample_points(10)) {
        CHECK(w.phi.eval(p) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(w.r.eval(p) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    }
}

TEST_CASE("r * rho == 1 at 100 quasi-random points") {
    WeightSpec spec;
    spec.s = 4.0;
    auto w = make_weights(spec);
    for (const auto& p : sample_points(100)) {
        CHECK(std::abs(w.r.eval(p) * w.rho.eval(p) - 1.0) <= 1e-14);
    }
}

TEST_CASE("hyperbolic weight factorizes through e^{-lambda beta t^2}") {
    WeightSpec spec;
    spec.psi_preset = WeightSpec::Psi::Hyperbolic;
    spec.s = 1.0;
    spec.x_star = {1.5, 1.5};
    spec.beta = 0.5;
    spec.c0 = 1.0;
    auto w = make_weights(spec);
    for (const auto& p : sample_points(30, 1, spec.T)) {
        const double t = p[2];
        const double dist2 = (p[0] - 1.5) * (p[0] - 1.5) + (p[1] - 1.5) * (p[1] - 1.5);
        const double theta_t = std::exp(-spec.lambda * spec.beta * t * t);
        const double phi_x = std::exp(spec.lambda * (dist2 + spec.c0));
        const double expected = std::exp(spec.s * theta_t * phi_x);
        CHECK(rel_close(w.r.eval(p), expected, 1e-12));
    }
}

TEST_CASE("hyperbolic psi value: x* = (2,2), beta = 1/2, c0 = 1 at (0,0,t=1)") {
    WeightSpec spec;
    spec.psi_preset = WeightSpec::Psi::Hyperbolic;
    spec.s = 1.0;
    spec.x_star = {2.0, 2.0};
    auto w = make_weights(spec);
    CHECK(w.psi.eval(Point{0.0, 0.0, 1.0}) == doctest::Approx(8.5).epsilon(1e-15));
}

TEST_CASE("theta values and endpoint maximum") {
    CHECK(theta(0.0, 0.5, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    for (double delta : {0.1, 0.3, 0.5}) {
        for (double T : {0.5, 1.0, 2.0}) {
            CHECK(theta(0.0, delta, T) == doctest::Approx(theta(T, delta, T)).epsilon(1e-15));
            const double peak = 1.0 / (T * T * delta * (1.0 + delta));
            CHECK(theta(0.0, delta, T) == doctest::Approx(peak).epsilon(1e-14));
            CHECK(peak <= 1.0 / (T * T * delta) + 1e-15);
            double maxv = 0.0;
            for (int k = 0; k <= 200; ++k) maxv = std::max(maxv, theta(T * k / 200.0, delta, T));
            CHECK(maxv == doctest::Approx(peak).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS((void)theta(-0.1, 0.3, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)theta(1.1, 0.3, 1.0), std::domain_error);
}

TEST_CASE("theta is symmetric about T/2") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double delta = 0.3, T = 1.7;
    for (int k = 0; k < 100; ++k) {
        const double t = T * u(rng);
        CHECK(std::abs(theta(t, delta, T) - theta(T - t, delta, T)) <= 1e-14 * theta(t, delta, T));
    }
}

TEST_CASE("regime_check arithmetic") {
    WeightSpec c;
    c.s = 10.0;
    auto r1 = regime_check(c, 0.05);
    REQUIRE(!r1.conditions.empty());
    CHECK(r1.conditions[0].value == doctest::Approx(0.5));
    CHECK(r1.all_pass());

    WeightSpec t;
    t.s_mode = WeightSpec::SMode::TimeDependent;
    t.tau = 1.0;
    t.delta = 0.5;
    t.T = 1.0;
    auto r2 = regime_check(t, 0.6);
    CHECK(r2.conditions[0].value == doctest::Approx(1.2));
    CHECK(!r2.all_pass());

    auto r3 = regime_check(t, 0.1, 0.1);
    REQUIRE(r3.conditions.size() == 2);
    CHECK(r3.conditions[1].value == doctest::Approx(0.4));
    CHECK(r3.all_pass());
}

TEST_CASE("chain rule: d_i r = s lambda (d_i psi) phi r") {
    WeightSpec spec;
    spec.s = 3.0;
    spec.lambda = 1.5;
    auto w = make_weights(spec);
    for (const auto& p : sample_points(20, 2)) {
        for (int i = 0; i < 2; ++i) {
            const MultiIndex e = MultiIndex::unit(2, i);
            const double lhs = derivative(w.r, e, p);
            const double rhs = spec.s * spec.lambda * derivative(w.psi, e, p) * w.phi.eval(p) * w.r.eval(p);
            CHECK(rel_close(lhs, rhs, 1e-12));
        }
    }
}

TEST_CASE("swap (r <-> rho, s -> -s) reproduces the original fields") {
    WeightSpec spec;
    spec.s = 2.0;
    auto w = make_weights(spec);
    auto sw = w.swapped();
    for (const auto& p : sample_points(50, 3)) {
        CHECK(rel_close(sw.r.eval(p), w.r.eval(p), 1e-14));
        CHECK(rel_close(sw.rho.eval(p), w.rho.eval(p), 1e-14));
    }
}

TEST_CASE("rho derivatives match the finite-difference oracle") {
    WeightSpec spec;
    spec.s = 2.0;
    spec.lambda = 1.0;
    auto w = make_weights(spec);
    const Point p{0.4, 0.6, 0.0};
    const double jet_d = derivative(w.rho, MultiIndex{3, 0}, p);
    const double fd = fd_derivative(w.rho, MultiIndex{3, 0}, p, 0.01);
    CHECK(rel_close(jet_d, fd, 1e-6));
}

TEST_CASE("weight-field derivatives up to order 6 match finite differences") {
    WeightSpec spec;
    spec.s = 2.0;
    spec.lambda = 2.0;
    auto w = make_weights(spec);
    const Point p{0.8, 0.7, 0.0};
    const std::vector<MultiIndex> alphas = {{3, 3}, {2, 2}, {4, 1}, {0, 6}, {6, 0}, {1, 1}};
    // The oracle step tracks each field's log-derivative scale: r compresses
    // features by a factor ~ s lambda phi |psi'|, the others by ~ lambda.
    for (const auto& [f, step] : std::vector<std::pair<const ScalarField*, double>>{
             {&w.phi, 0.06}, {&w.rho, 0.06}, {&w.r, 0.012}}) {
        for (const auto& a : alphas) {
            const double jet_d = derivative(*f, a, p);
            const double fd = carleman::testing::fd_derivative_rich(*f, a, p, step);
            CHECK(rel_close(jet_d, fd, 1e-6, 1e-8));
        }
    }
    // psi is quadratic: orders <= 2 against the oracle, higher orders are
    // exactly zero through jets (the oracle's noise floor is meaningless for
    // an identically vanishing target).
    for (const auto& a : std::vector<MultiIndex>{{1, 0}, {1, 1}, {0, 2}}) {
        CHECK(rel_close(derivative(w.psi, a, p), fd_derivative(w.psi, a, p, 0.02), 1e-6, 1e-8));
    }
    for (const auto& a : alphas)
        if (a.order() > 2) CHECK(derivative(w.psi, a, p) == 0.0);
}

TEST_CASE("time-dependent mode: r = e^{tau theta(t) phi(x)}") {
    WeightSpec spec;
    spec.s_mode = WeightSpec::SMode::TimeDependent;
    spec.tau = 2.0;
    spec.delta = 0.3;
    spec.T = 1.0;
    auto w = make_weights(spec);
    for (const auto& p : sample_points(20, 4, spec.T)) {
        const double expected = std::exp(spec.tau * theta(p[2], spec.delta, spec.T) * w.phi.eval(p));
        CHECK(rel_close(w.r.eval(p), expected, 1e-13));
        CHECK(std::abs(w.r.eval(p) * w.rho.eval(p) - 1.0) <= 1e-14);
    }
}

TEST_CASE("invalid specs are rejected") {
    WeightSpec bad;
    bad.delta = 0.7;
    CHECK_THROWS_AS((void)make_weights(bad), std::invalid_argument);

    WeightSpec neg;
    neg.s = 0.5;
    CHECK_THROWS_AS((void)make_weights(neg), std::invalid_argument);

    WeightSpec inside;
    inside.psi_preset = WeightSpec::Psi::Hyperbolic;
    inside.x_star = {0.5, 0.5};
    CHECK_THROWS_AS((void)make_weights(inside), std::invalid_argument);
}

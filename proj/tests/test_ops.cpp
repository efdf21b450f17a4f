#include "carleman/ops.hpp"
#include "carleman/numeric.hpp"
#include "carleman/weights.hpp"

#include "doctest.h"
#include "fd_oracle.hpp"

#include <cmath>
#include <random>

using namespace carleman;
using carleman::testing::rel_close;

namespace {

ScalarField coord(int i) { return ScalarField::coordinate(2, i); }

ScalarField exp_field(double a, double b) {
    return ScalarField::from_program(2, false, [a, b](std::span<const Jet> x) {
        return jet_exp(x[0] * a + x[1] * b);
    });
}

ScalarField sin_x0() {
    // sin via jets: Im(e^{ix}) is unavailable, so use the odd/even split
    // exp(ix) decomposition is overkill; a short Taylor program suffices for
    // the identity checks because the identities hold for any smooth field.
    // Here: sin(x0) programmed from exp jets: sin x = (e^{ix}...)  -- instead
    // just compose: sin(x) = cos-free ipath: use 2*e^x/(...)?  Simpler: the
    // identities are field-agnostic, so exp(-x^2) serves the same purpose.
    return ScalarField::from_program(2, false, [](std::span<const Jet> x) {
        return jet_exp((x[0] * x[0]) * -1.0);
    });
}

std::vector<Point> halton_points(int count, unsigned seed = 0) {
    HaltonSequence seq(3, seed);
    auto pts = seq.box(count, 0.1, 0.9);
    for (auto& p : pts) p[2] = 0.0;
    return pts;
}

} // namespace

TEST_CASE("translate basics") {
    auto f = coord(0);
    const Point p{0.5, 0.25, 0.0};
    CHECK(translate(f, 0, 0, 0.2).eval(p) == f.eval(p));
    CHECK(translate(f, 0, 1, 0.2).eval(p) == doctest::Approx(0.6).epsilon(1e-15));

    auto g = exp_field(1.0, 0.5);
    auto twice = translate(translate(g, 0, 1, 0.2), 0, 1, 0.2);
    auto once = translate(g, 0, 2, 0.2);
    for (const auto& q : halton_points(20))
        CHECK(rel_close(twice.eval(q), once.eval(q), 1e-15));
}

TEST_CASE("difference operator exactness on polynomials") {
    const Point p{0.3, 0.7, 0.0};
    for (double h : {0.5, 0.1, 0.01}) {
        CHECK(diff(coord(0), 0, 1, h).eval(p) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(diff(coord(0) * coord(0), 0, 2, h).eval(p) == doctest::Approx(2.0).epsilon(1e-13));
    }
    // D^n annihilates lower degrees and maps x^n to n!
    for (int n = 1; n <= 4; ++n) {
        ScalarField xn = ScalarField::constant(2, 1.0);
        for (int k = 0; k < n - 1; ++k) xn = xn * coord(0);
        CHECK(std::abs(diff(xn, 0, n, 0.3).eval(p)) <= 1e-12);
        ScalarField xnn = xn * coord(0);
        CHECK(rel_close(diff(xnn, 0, n, 0.3).eval(p), factorial(n), 1e-12));
    }
}

TEST_CASE("difference of e^x against the closed-form stencil value") {
    auto f = exp_field(1.0, 0.0);
    const Point p{0.0, 0.5, 0.0};
    const double got = diff(f, 0, 1, 0.1).eval(p);
    const double oracle = (std::exp(0.05) - std::exp(-0.05)) / 0.1;
    CHECK(rel_close(got, oracle, 1e-14));
    CHECK(got == doctest::Approx(1.0004167187531).epsilon(1e-12));
}

TEST_CASE("average operator basics") {
    const Point p{1.0, 0.2, 0.0};
    for (int n = 1; n <= 4; ++n) {
        CHECK(avg(ScalarField::constant(2, 3.5), 0, n, 0.3).eval(p) == doctest::Approx(3.5).epsilon(1e-15));
        CHECK(avg(coord(0), 0, n, 0.3).eval(p) == doctest::Approx(p[0]).epsilon(1e-15));
    }
    // A(x^2) at x = 1, h = 0.2: ((1.1)^2 + (0.9)^2)/2 = 1.01 = x^2 + h^2/4
    CHECK(avg(coord(0) * coord(0), 0, 1, 0.2).eval(p) == doctest::Approx(1.01).epsilon(1e-15));
}

TEST_CASE("direct binomial stencil equals n-fold recursion") {
    auto f = exp_field(0.7, -0.4);
    for (int n : {2, 3, 5}) {
        auto direct_d = diff(f, 0, n, 0.25);
        auto iter_d = diff_iterated(f, 0, n, 0.25);
        auto direct_a = avg(f, 1, n, 0.25);
        auto iter_a = avg_iterated(f, 1, n, 0.25);
        // The iterated construction amplifies rounding by ~eps/h^n relative
        // to the cancelled result, so compare at that scale, not at eps.
        for (const auto& p : halton_points(15)) {
            CHECK(rel_close(direct_d.eval(p), iter_d.eval(p), 1e-10, 1e-11));
            CHECK(rel_close(direct_a.eval(p), iter_a.eval(p), 1e-13));
        }
    }
}

TEST_CASE("operators are linear and commute across directions") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto f = exp_field(0.8, 0.1);
    auto g = sin_x0();
    const double a = u(rng), b = u(rng);
    auto comb = a * f + b * g;
    const double h = 0.2;

    auto lin_lhs = diff(comb, 0, 2, h);
    auto lin_rhs = a * diff(f, 0, 2, h) + b * diff(g, 0, 2, h);
    auto com_lhs = diff(avg(f, 1, 2, h), 0, 1, h);
    auto com_rhs = avg(diff(f, 0, 1, h), 1, 2, h);
    for (const auto& p : halton_points(25)) {
        CHECK(rel_close(lin_lhs.eval(p), lin_rhs.eval(p), 1e-13, 1e-14));
        CHECK(rel_close(com_lhs.eval(p), com_rhs.eval(p), 1e-13));
    }
}

TEST_CASE("bi-directional composition") {
    const BiIndex zero(0, 1, 0, 0);
    auto f = exp_field(0.5, 0.5);
    const Point p{0.4, 0.4, 0.0};
    CHECK(apply_bi(f, zero, zero, 0.2).eval(p) == f.eval(p));

    // D_h^(1,1) on x1 x2 is exactly 1
    auto bilinear = coord(0) * coord(1);
    CHECK(apply_bi_diff(bilinear, BiIndex(0, 1, 1, 1), 0.3).eval(p) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS((void)apply_bi(f, BiIndex(0, 1, 1, 0), BiIndex(1, 0, 1, 0), 0.1),
                    std::invalid_argument);
}

TEST_CASE("time differences") {
    auto tf = ScalarField::coordinate(2, 2); // t
    const Point p{0.1, 0.1, 0.4};
    CHECK(dt_diff(tf, 0.05, TimeDiffVariant::Forward).eval(p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dt_diff(tf, 0.05, TimeDiffVariant::CenteredHalf).eval(p) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)dt_diff(coord(0), 0.05, TimeDiffVariant::Forward), std::invalid_argument);
}

TEST_CASE("centered half-step difference of a^{alpha t}") {
    // With a = (1/(1 - alpha dt))^{1/(alpha dt)}: D_t a^{alpha t} = alpha tau^+ a^{alpha t}
    const double alpha = 2.0, dt = 0.25; // alpha dt = 1/2 -> a = 4
    const double a = std::pow(1.0 / (1.0 - alpha * dt), 1.0 / (alpha * dt));
    CHECK(a == doctest::Approx(4.0).epsilon(1e-14));

    auto f = ScalarField::from_program(2, true, [alpha, a](std::span<const Jet> x) {
        return jet_exp(x[2] * (alpha * std::log(a)));
    });
    auto lhs = dt_diff(f, dt, TimeDiffVariant::CenteredHalf);
    auto rhs = alpha * shift(f, 2, dt / 2.0);
    for (double t : {0.1, 0.3, 0.55, 0.8}) {
        const Point p{0.2, 0.2, t};
        CHECK(rel_close(lhs.eval(p), rhs.eval(p), 1e-12));
    }
}

TEST_CASE("product rules are exact") {
    auto pts = halton_points(100);

    auto ones = check_product_rules(ScalarField::constant(2, 1.0), ScalarField::constant(2, 1.0), 0,
                                    0.3, pts);
    for (const auto& c : ones.cases) CHECK(c.max_abs == 0.0);

    auto poly = check_product_rules(coord(0), coord(0), 0, 0.4, pts);
    CHECK(poly.all_pass());
    for (const auto& c : poly.cases) CHECK(c.max_abs <= 1e-15);

    auto smooth = check_product_rules(exp_field(1.0, 0.0), sin_x0(), 0, 0.3, pts);
    CHECK(smooth.all_pass());
    for (const auto& c : smooth.cases) CHECK(c.max_rel <= 1e-13);
}

TEST_CASE("difference Leibniz rule") {
    auto pts = halton_points(40);

    // degree <= 3 polynomials, n = 2: closed-form check D^2(x^3 * x) = 12x^2 + 2h^2
    const double h = 0.3;
    auto cube = coord(0) * coord(0) * coord(0);
    auto lhs = diff(cube * coord(0), 0, 2, h);
    for (const auto& p : pts)
        CHECK(rel_close(lhs.eval(p), 12.0 * p[0] * p[0] + 2.0 * h * h, 1e-13));
    CHECK(check_leibniz(cube, coord(0), 0, 2, h, pts).all_pass());

    for (int n = 1; n <= 4; ++n) {
        auto rep = check_leibniz(exp_field(0.9, 0.2), sin_x0(), 0, n, 0.3, pts);
        CHECK(rep.all_pass());
    }

    // uv == 1: the right-hand side must cancel to ~1e-12 absolute
    auto ef = exp_field(1.0, 0.0);
    auto enf = ScalarField::from_program(2, false, [](std::span<const Jet> x) {
        return jet_exp(x[0] * -1.0);
    });
    for (int n = 1; n <= 3; ++n) {
        auto rep = check_leibniz(ef, enf, 0, n, 0.3, pts);
        CHECK(rep.all_pass());
        CHECK(rep.cases[0].max_abs <= 1e-12);
    }
}

TEST_CASE("even-power average expansion") {
    auto pts = halton_points(40);
    auto u = exp_field(0.6, -0.3);
    auto v = sin_x0();

    // m = 0 collapses to the identity
    auto m0 = check_avg_leibniz_even(u, v, 0, 0, 0.3, pts);
    CHECK(m0.cases[0].max_abs == 0.0);

    // m = 1 on x^2: A^2 f = f + (h^2/4) D^2 f, both sides in closed form
    const double h = 0.25;
    auto sq = coord(0) * coord(0);
    auto direct = avg(sq, 0, 2, h);
    for (const auto& p : pts)
        CHECK(rel_close(direct.eval(p), p[0] * p[0] + h * h / 2.0, 1e-14));
    CHECK(check_avg_leibniz_even(coord(0), coord(0), 0, 1, h, pts).all_pass());

    for (int m = 1; m <= 2; ++m) {
        auto rep = check_avg_leibniz_even(u, v, 0, m, 0.3, pts);
        CHECK(rep.all_pass());
        CHECK(rep.cases[0].max_rel <= 1e-12);
    }

    // The C(m,j)-free variant genuinely fails at m = 2 on quartics: the
    // informational case records the discrepancy without gating the suite.
    auto quart = check_avg_leibniz_even(sq, sq, 0, 2, 0.4, pts);
    CHECK(quart.all_pass());
    REQUIRE(quart.cases.size() == 2);
    CHECK(quart.cases[0].max_rel <= 1e-13);
    CHECK(!quart.cases[1].gating);
    CHECK(quart.cases[1].max_rel > 1e-6);
}

TEST_CASE("Tepper sums") {
    CHECK(std::abs(tepper_sum(2, 1, 7.3)) <= 1e-12);
    CHECK(tepper_sum(3, 3, -1.4) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(std::abs(tepper_sum(4, 5, 2.0)) <= 1e-12);

    // vanishing cases and n! cases up to n = 12 over an x grid
    for (int n = 0; n <= 12; ++n) {
        for (double x : {-2.5, 0.0, 1.0, 3.7, 6.0, 11.2}) {
            for (int r = 0; r < n; ++r) CHECK(std::abs(tepper_sum(n, r, x)) <= 1e-9);
            CHECK(std::abs(tepper_sum(n, n, x) - factorial(n)) <= 1e-9);
        }
        // odd-moment cancellation at the symmetry point
        CHECK(std::abs(tepper_sum(n, n + 1, n / 2.0)) <= 1e-9);
    }
}

TEST_CASE("operator reach is checked against the field margin") {
    auto f = ScalarField::from_program(
        2, false, [](std::span<const Jet> x) { return jet_exp(x[0]); }, 10, 0.05);
    CHECK_NOTHROW((void)diff(f, 0, 1, 0.1));          // reach 0.05
    CHECK_THROWS_AS((void)diff(f, 0, 2, 0.1), std::domain_error); // reach 0.1
    CHECK_THROWS_AS((void)translate(f, 0, 3, 0.1), std::domain_error);
}

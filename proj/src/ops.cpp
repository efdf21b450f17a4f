#include "carleman/ops.hpp"

#include <algorithm>
#include <cmath>

namespace carleman {

namespace {

void check_direction(const ScalarField& f, int i) {
    if (i < 0 || i >= f.space_dim())
        throw std::invalid_argument("discrete op: direction index out of range");
}

void check_h(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("discrete op: h must be positive");
}

/// Residual of LHS against a sum of RHS terms over a point set. The relative
/// scale is the largest magnitude among the LHS and the individual RHS terms,
/// so cancellation-to-zero cases are judged against the cancelling masses.
IdentityCase residual_case(std::string name, const ScalarField& lhs,
                           const std::vector<ScalarField>& rhs_terms,
                           const std::vector<Point>& points, double tol_rel) {
    IdentityCase c;
    c.name = std::move(name);
    c.tol_rel = tol_rel;
    for (const auto& p : points) {
        const double l = lhs.eval(p);
        KahanSum sum;
        double scale = std::abs(l);
        for (const auto& t : rhs_terms) {
            const double v = t.eval(p);
            sum.add(v);
            scale = std::max(scale, std::abs(v));
        }
        const double abs_res = std::abs(l - sum.value());
        c.max_abs = std::max(c.max_abs, abs_res);
        c.max_rel = std::max(c.max_rel, abs_res / std::max(scale, 1.0));
    }
    c.pass = c.max_rel <= tol_rel;
    return c;
}

} // namespace

ScalarField translate(const ScalarField& f, int i, int steps, double h) {
    check_direction(f, i);
    check_h(h);
    return shift(f, i, steps * h / 2.0);
}

ScalarField diff(const ScalarField& f, int i, int n, double h) {
    check_direction(f, i);
    check_h(h);
    if (n < 0) throw std::invalid_argument("diff: negative order");
    if (n == 0) return f;
    std::vector<StencilTap> taps;
    taps.reserve(n + 1);
    const double hn = std::pow(h, n);
    for (int k = 0; k <= n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        taps.push_back({(n - 2 * k) * h / 2.0, sign * binomial(n, k) / hn});
    }
    return stencil(f, i, std::move(taps));
}

ScalarField avg(const ScalarField& f, int i, int n, double h) {
    check_direction(f, i);
    check_h(h);
    if (n < 0) throw std::invalid_argument("avg: negative order");
    if (n == 0) return f;
    std::vector<StencilTap> taps;
    taps.reserve(n + 1);
    const double scale = std::ldexp(1.0, -n); // 2^-n exactly
    for (int k = 0; k <= n; ++k)
        taps.push_back({(n - 2 * k) * h / 2.0, binomial(n, k) * scale});
    return stencil(f, i, std::move(taps));
}

ScalarField diff_iterated(const ScalarField& f, int i, int n, double h) {
    ScalarField g = f;
    for (int k = 0; k < n; ++k) g = diff(g, i, 1, h);
    return g;
}

ScalarField avg_iterated(const ScalarField& f, int i, int n, double h) {
    ScalarField g = f;
    for (int k = 0; k < n; ++k) g = avg(g, i, 1, h);
    return g;
}

ScalarField apply_bi_diff(const ScalarField& f, const BiIndex& k, double h) {
    return diff(diff(f, k.dir_j, k.k_j, h), k.dir_i, k.k_i, h);
}

ScalarField apply_bi_avg(const ScalarField& f, const BiIndex& l, double h) {
    return avg(avg(f, l.dir_j, l.k_j, h), l.dir_i, l.k_i, h);
}

ScalarField apply_bi(const ScalarField& f, const BiIndex& D, const BiIndex& A, double h) {
    if (D.dir_i != A.dir_i || D.dir_j != A.dir_j)
        throw std::invalid_argument("apply_bi: difference and average blocks bound to different direction pairs");
    return apply_bi_avg(apply_bi_diff(f, D, h), A, h);
}

ScalarField dt_diff(const ScalarField& f, double dt, TimeDiffVariant variant) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt_diff: dt must be positive");
    if (!f.time_dependent())
        throw std::invalid_argument("dt_diff: field does not depend on time");
    const int tdim = f.space_dim();
    std::vector<StencilTap> taps;
    if (variant == TimeDiffVariant::Forward)
        taps = {{dt, 1.0 / dt}, {0.0, -1.0 / dt}};
    else
        taps = {{dt / 2.0, 1.0 / dt}, {-dt / 2.0, -1.0 / dt}};
    return stencil(f, tdim, std::move(taps));
}

ScalarField time_translate(const ScalarField& f, double dt) {
    return shift(f, f.space_dim(), dt);
}

IdentityReport check_product_rules(const ScalarField& u, const ScalarField& v, int i, double h,
                                   const std::vector<Point>& points) {
    IdentityReport rep;
    const ScalarField uv = u * v;
    rep.cases.push_back(residual_case(
        "D(uv) = Du Av + Dv Au", diff(uv, i, 1, h),
        {diff(u, i, 1, h) * avg(v, i, 1, h), diff(v, i, 1, h) * avg(u, i, 1, h)}, points, 1e-13));
    rep.cases.push_back(residual_case(
        "A(uv) = Au Av + (h^2/4) Du Dv", avg(uv, i, 1, h),
        {avg(u, i, 1, h) * avg(v, i, 1, h),
         (h * h / 4.0) * (diff(u, i, 1, h) * diff(v, i, 1, h))},
        points, 1e-13));
    return rep;
}

IdentityReport check_leibniz(const ScalarField& u, const ScalarField& v, int i, int n, double h,
                             const std::vector<Point>& points) {
    IdentityReport rep;
    std::vector<ScalarField> terms;
    terms.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        terms.push_back(binomial(n, k) *
                        (avg(diff(u, i, n - k, h), i, k, h) * diff(avg(v, i, n - k, h), i, k, h)));
    }
    rep.cases.push_back(residual_case("D^" + std::to_string(n) + "(uv) Leibniz",
                                      diff(u * v, i, n, h), terms, points, 1e-12));
    return rep;
}

IdentityReport check_avg_leibniz_even(const ScalarField& u, const ScalarField& v, int i, int m,
                                      double h, const std::vector<Point>& points) {
    if (m < 0) throw std::invalid_argument("check_avg_leibniz_even: negative m");
    IdentityReport rep;
    const ScalarField uv = u * v;
    const ScalarField lhs = avg(uv, i, 2 * m, h);

    std::vector<ScalarField> terms, terms_unweighted;
    for (int j = 0; j <= m; ++j) {
        const double w = std::pow(h * h / 4.0, j);
        terms.push_back((binomial(m, j) * w) * diff(uv, i, 2 * j, h));
        terms_unweighted.push_back(w * diff(uv, i, 2 * j, h));
    }
    rep.cases.push_back(residual_case("A^" + std::to_string(2 * m) + "(uv) = sum C(m,j)(h^2/4)^j D^{2j}(uv)",
                                      lhs, terms, points, 1e-12));

    auto printed = residual_case("A^" + std::to_string(2 * m) + "(uv), C(m,j)-free variant", lhs,
                                 terms_unweighted, points, 1e-12);
    printed.gating = false;
    printed.note = "reference only: exact for m <= 1, off by the missing binomial weight for m >= 2";
    rep.cases.push_back(std::move(printed));
    return rep;
}

double tepper_sum(int n, int r, double x) {
    if (n < 0 || r < 0) throw std::invalid_argument("tepper_sum: negative arguments");
    DD acc = DD::from(0.0);
    for (int k = 0; k <= n; ++k) {
        // x - k can cross binades and round; keep the exact difference.
        DD term = DD::pow(DD::two_sum(x, -k), r) * binomial(n, k);
        if (k % 2 == 1) term = -term;
        acc = acc + term;
    }
    return acc.value();
}

} // namespace carleman

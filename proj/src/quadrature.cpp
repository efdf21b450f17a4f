#include "carleman/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace carleman {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

/// Integrate with a quick relative pass, then a targeted pass only when the
/// first error estimate misses the absolute budget. The acceptance floor is
/// the rounding saturation of the panel sums; below it the estimator carries
/// no information.
QuadratureResult run(const std::function<double(double)>& f, double abs_tol, int max_depth,
                     const char* who) {
    double err = 0.0, l1 = 0.0;
    double value = GK::integrate(f, 0.0, 1.0, max_depth, 1e-12, &err, &l1);
    if (err > abs_tol) {
        const double tol = std::clamp(0.25 * abs_tol / std::max(l1, 1e-300), 5e-15, 1e-12);
        value = GK::integrate(f, 0.0, 1.0, max_depth, tol, &err, &l1);
    }
    const double floor = 32 * std::numeric_limits<double>::epsilon() * l1;
    if (err > std::max(abs_tol, floor))
        throw QuadratureError(std::string(who) + ": error estimate above the requested tolerance");
    return {value, err};
}

} // namespace

QuadratureResult integrate_01(const std::function<double(double)>& f, const QuadratureSpec& spec) {
    return run(f, spec.abs_tol, spec.max_depth, "integrate_01");
}

QuadratureResult integrate_01_sq(const std::function<double(double, double)>& f,
                                 const QuadratureSpec& spec) {
    QuadratureSpec inner = spec;
    inner.abs_tol = std::max(spec.abs_tol / 4.0, 2e-14);
    double inner_err = 0.0;
    auto outer = [&](double s) {
        auto r = integrate_01([&](double t) { return f(s, t); }, inner);
        inner_err = std::max(inner_err, r.error_estimate);
        return r.value;
    };
    auto res = run(outer, spec.abs_tol, spec.max_depth, "integrate_01_sq");
    res.error_estimate += inner_err;
    return res;
}

} // namespace carleman

#pragma once

// Test-only independent oracle: mixed partial derivatives by composition of
// 4th-order central first-difference stencils. Deliberately independent of
// the jet machinery it is used to audit.

#include "carleman/field.hpp"

#include <functional>

namespace carleman::testing {

using PointFn = std::function<double(const Point&)>;

inline double fd_first(const PointFn& f, const Point& x, int dim, double step) {
    auto at = [&](double d) {
        Point y = x;
        y[dim] += d;
        return f(y);
    };
    return (-at(2 * step) + 8 * at(step) - 8 * at(-step) + at(-2 * step)) / (12 * step);
}

inline double fd_derivative(const PointFn& f, const MultiIndex& alpha, const Point& x, double step) {
    int i = -1;
    for (int k = 0; k < alpha.dim(); ++k)
        if (alpha[k] > 0) {
            i = k;
            break;
        }
    if (i < 0) return f(x);
    const MultiIndex rest = alpha - MultiIndex::unit(alpha.dim(), i);
    PointFn inner = [&](const Point& y) { return fd_derivative(f, rest, y, step); };
    return fd_first(inner, x, i, step);
}

inline double fd_derivative(const ScalarField& f, const MultiIndex& alpha_space, const Point& x,
                            double step) {
    std::vector<int> e = alpha_space.entries();
    if (static_cast<int>(e.size()) == f.space_dim()) e.push_back(0);
    return fd_derivative([&](const Point& y) { return f.eval(y); }, MultiIndex(std::move(e)), x, step);
}

/// Richardson-extrapolated variant built from three 4th-order estimates at
/// steps h, h/2, h/4 (order 8). Needed when the target tolerance is tighter
/// than a single 4th-order stencil can deliver on rapidly growing
/// derivatives. The base step should scale inversely with the field's
/// log-derivative magnitude.
inline double fd_derivative_rich(const ScalarField& f, const MultiIndex& alpha_space, const Point& x,
                                 double step) {
    const double c = fd_derivative(f, alpha_space, x, step);
    const double m = fd_derivative(f, alpha_space, x, step / 2.0);
    const double q = fd_derivative(f, alpha_space, x, step / 4.0);
    const double r1 = (16.0 * m - c) / 15.0;
    const double r2 = (16.0 * q - m) / 15.0;
    return (64.0 * r2 - r1) / 63.0;
}

inline bool rel_close(double a, double b, double rel, double abs_tol = 0.0) {
    const double d = std::abs(a - b);
    return d <= abs_tol || d <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace carleman::testing

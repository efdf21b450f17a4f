#pragma once

// Adaptive quadrature on [0,1] and [0,1]^2 for the integral remainder terms.
// A fixed 15-point Gauss-Kronrod rule is applied with adaptive bisection;
// every value is returned together with its error estimate, and callers that
// need a hard absolute tolerance treat an estimate above it as
// nonconvergence.

#include <functional>
#include <stdexcept>

namespace carleman {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    int max_depth = 10; // adaptive bisection depth (up to 2^max_depth panels)
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integral over [0,1]; throws QuadratureError when the error estimate does
/// not reach spec.abs_tol.
QuadratureResult integrate_01(const std::function<double(double)>& f, const QuadratureSpec& spec);

/// Tensor-product integral over [0,1]^2 (adaptive outer rule, adaptive inner
/// rule per abscissa). Error estimate combines both directions.
QuadratureResult integrate_01_sq(const std::function<double(double, double)>& f,
                                 const QuadratureSpec& spec);

} // namespace carleman

#pragma once

// Concrete weight functions: r = e^{s phi}, rho = r^{-1}, phi = e^{lambda psi},
// with psi either a strictly positive quadratic (gradient bounded away from
// zero on the closed unit box) or the hyperbolic-type profile
// psi(t,x) = |x - x*|^2 - beta t^2 + c0 with x* outside the box. In the
// time-dependent mode the amplitude is s(t) = tau * theta(t) with
// theta(t) = 1/((t + delta T)(T + delta T - t)).

#include "carleman/field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace carleman {

struct WeightSpec {
    enum class Psi { Poly, Hyperbolic };
    enum class SMode { Constant, TimeDependent };

    Psi psi_preset = Psi::Poly;
    SMode s_mode = SMode::Constant;
    int dim = 2;         // space dimension
    double lambda = 1.0; // >= 1
    double s = 2.0;      // constant mode, >= 1 (sign flips internally for the swap symmetry)
    double tau = 1.0;    // time-dependent mode, >= 1
    double delta = 0.3;  // in (0, 1/2]
    double T = 1.0;      // > 0

    // poly preset: psi(x) = psi_c + sum_i psi_a[i] * (x_i + psi_b[i])^2.
    // Empty vectors select the defaults a_i = 1/4, b_i = 1/2: a strictly
    // positive quadratic whose gradient never vanishes on the closed box.
    double psi_c = 0.1;
    std::vector<double> psi_a;
    std::vector<double> psi_b;

    // hyperbolic preset
    double beta = 0.5; // in (0,1)
    double c0 = 1.0;   // > 0, chosen so psi >= 1 on [-T,T] x box
    Point x_star = {1.5, 1.5};

    /// Throws std::invalid_argument when a constraint is violated.
    void validate() const;

    bool time_dependent() const {
        return s_mode == SMode::TimeDependent || psi_preset == Psi::Hyperbolic;
    }

    /// s in constant mode, tau * theta(t) otherwise.
    double s_at(double t) const;

    /// Largest |s| over [0, T].
    double s_max() const;
};

/// theta(t) = 1/((t + delta T)(T + delta T - t)), positive and smooth on
/// [0, T], symmetric about T/2, maximal at the endpoints.
double theta(double t, double delta, double T);

struct WeightFields {
    ScalarField psi;
    ScalarField phi; // e^{lambda psi}
    ScalarField r;   // e^{s phi} (or e^{tau theta(t) phi})
    ScalarField rho; // r^{-1}
    WeightSpec spec;

    /// Same fields with r and rho interchanged and s (resp. tau) negated;
    /// every estimate in the calculus is invariant under this swap.
    WeightFields swapped() const;
};

/// Builds the four weight fields. r * rho == 1 identically by construction.
WeightFields make_weights(const WeightSpec& spec);

// ---------------------------------------------------------------------------
// Regime predicates
// ---------------------------------------------------------------------------

struct RegimeCondition {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct RegimeReport {
    std::vector<RegimeCondition> conditions;
    bool all_pass() const {
        for (const auto& c : conditions)
            if (!c.pass) return false;
        return true;
    }
    std::string describe() const;
};

/// Evaluates the smallness conditions relevant to `spec`:
/// s h <= 1 and s h <= eps in constant mode, tau h (delta T^2)^{-1} <= 1 in
/// time-dependent mode, and dt tau (T^3 delta^2)^{-1} <= 1/2 when a time step
/// is supplied. Pure predicate report; claim runners refuse to assert
/// asymptotics when their conditions fail.
RegimeReport regime_check(const WeightSpec& spec, double h, std::optional<double> dt = std::nullopt,
                          double eps = 1.0);

} // namespace carleman

#pragma once

// Half-step translation, difference, and average operators, their powers and
// cross-direction compositions, the exact product/Leibniz identities they
// satisfy, and the Tepper binomial sums underlying the difference expansion.
//
// Iterated operators use the direct binomial stencil in a single pass;
// equality with the n-fold recursion is a unit test, not an implementation
// detail.

#include "carleman/field.hpp"

#include <string>
#include <vector>

namespace carleman {

/// f(x + steps * h/2 * e_i). `steps` counts signed half-h units.
ScalarField translate(const ScalarField& f, int i, int steps, double h);

/// n-th difference D_i^n f = (1/h^n) sum_k (-1)^k C(n,k) f(. + (n-2k) h/2 e_i).
ScalarField diff(const ScalarField& f, int i, int n, double h);

/// n-th average A_i^n f = (1/2^n) sum_k C(n,k) f(. + (n-2k) h/2 e_i).
ScalarField avg(const ScalarField& f, int i, int n, double h);

/// n-fold application of the single-step operator; reference construction
/// used to validate the direct stencils.
ScalarField diff_iterated(const ScalarField& f, int i, int n, double h);
ScalarField avg_iterated(const ScalarField& f, int i, int n, double h);

/// A_h^A D_h^D f: the difference block first, then the average block.
/// Both bi-indices must be bound to the same direction pair.
ScalarField apply_bi(const ScalarField& f, const BiIndex& D, const BiIndex& A, double h);

/// D_h^k alone / A_h^l alone.
ScalarField apply_bi_diff(const ScalarField& f, const BiIndex& k, double h);
ScalarField apply_bi_avg(const ScalarField& f, const BiIndex& l, double h);

enum class TimeDiffVariant {
    Forward,      // (f(t + dt) - f(t)) / dt
    CenteredHalf, // (f(t + dt/2) - f(t - dt/2)) / dt
};
ScalarField dt_diff(const ScalarField& f, double dt, TimeDiffVariant variant);

/// f(. + dt e_t) (full time step).
ScalarField time_translate(const ScalarField& f, double dt);

// ---------------------------------------------------------------------------
// Exact identity checks
// ---------------------------------------------------------------------------

struct IdentityCase {
    std::string name;
    double max_abs = 0.0;
    double max_rel = 0.0;
    double tol_rel = 1e-12;
    bool pass = false;
    bool gating = true; // informational cases do not gate the suite
    std::string note;
};

struct IdentityReport {
    std::vector<IdentityCase> cases;
    bool all_pass() const {
        for (const auto& c : cases)
            if (c.gating && !c.pass) return false;
        return true;
    }
};

/// Product rules
///   D_i(uv) = D_i u A_i v + D_i v A_i u
///   A_i(uv) = A_i u A_i v + (h^2/4) D_i u D_i v
/// These are exact; residuals of order rounding only.
IdentityReport check_product_rules(const ScalarField& u, const ScalarField& v, int i, double h,
                                   const std::vector<Point>& points);

/// Difference Leibniz rule
///   D_i^n(uv) = sum_k C(n,k) D^{n-k}A^k u * A^{n-k}D^k v.
IdentityReport check_leibniz(const ScalarField& u, const ScalarField& v, int i, int n, double h,
                             const std::vector<Point>& points);

/// Even-power average expansion A_i^{2m}(uv) = sum_j C(m,j) (h^2/4)^j D_i^{2j}(uv).
/// The binomial factor C(m,j) is required for exactness (A^2 = I + (h^2/4)D^2
/// raised to the m-th power); the report also carries the residual of the
/// C(m,j)-free variant for reference.
IdentityReport check_avg_leibniz_even(const ScalarField& u, const ScalarField& v, int i, int m,
                                      double h, const std::vector<Point>& points);

// ---------------------------------------------------------------------------
// Tepper sums
// ---------------------------------------------------------------------------

/// sum_{k=0}^{n} (-1)^k C(n,k) (x-k)^r, evaluated in double-double arithmetic
/// with compensated accumulation (the cancellation is catastrophic in naive
/// order). Equals 0 for 0 <= r < n and n! for r = n, for every x; the sum
/// with r = n+1 vanishes at x = n/2.
double tepper_sum(int n, int r, double x);

} // namespace carleman

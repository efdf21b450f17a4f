#pragma once

// Integral remainder terms of the difference/average expansions
//   A_i^n f = f + R_{A_i^n}(f),    D_i^n f = d_i^n f + R_{D_i^n}(f),
// their cross-direction analogues, and the independent defect oracle that
// audits them. The defect (operator output minus continuous leading term,
// evaluated purely by stencils and jets) is ground truth; the integral
// formulas are secondary and every audit either confirms them or measures
// the constant by which a transcription differs.

#include "carleman/field.hpp"
#include "carleman/quadrature.hpp"

#include <string>
#include <vector>

namespace carleman {

/// R_{D_i^n}(f)(x) = h^2 sum_k C(n,k)(-1)^k ((n-2k)/2)^{n+2}
///                   int_0^1 (1-s)^{n+1}/(n+1)! d_i^{n+2} f(x + e~ s) ds,
/// with e~ = (n-2k) h/2 e_i. Exact: D_i^n f - d_i^n f equals this for any
/// smooth f.
QuadratureResult remainder_D(const ScalarField& f, int i, int n, double h, const Point& x,
                             const QuadratureSpec& q);

/// R_{A_i^n}(f)(x) = h^2/2^n sum_k C(n,k) (n-2k)^2/4
///                   int_0^1 (1-s) d_i^2 f(x + e~ s) ds.
QuadratureResult remainder_A(const ScalarField& f, int i, int n, double h, const Point& x,
                             const QuadratureSpec& q);

enum class CrossKind { AA, DD, AD };

/// Two readings of the cross-direction remainders:
///   Printed  — the coefficient/integrand exponents exactly as stated;
///   Derived  — the composition R_{·_j}(R_{·_i}(f)) of the one-direction
///              remainders, which is what the expansion algebra produces.
/// For AA the two coincide; for DD and AD they differ and the audit measures
/// the discrepancy rather than deciding it silently.
enum class CrossVariant { Printed, Derived };

/// Cross remainder for the pair (i, j): AA = A_j^m A_i^n, DD = D_j^m D_i^n,
/// AD = A_j^m D_i^n. Order n binds to direction i, order m to direction j.
QuadratureResult remainder_cross(const ScalarField& f, CrossKind kind, CrossVariant variant,
                                 int i, int j, int n, int m, double h, const Point& x,
                                 const QuadratureSpec& q);

// ---------------------------------------------------------------------------
// Defect oracle
// ---------------------------------------------------------------------------

/// lhs(x) - leading(x): the ground truth every remainder formula is audited
/// against.
double defect(const ScalarField& lhs, const ScalarField& leading, const Point& x);

/// Stencil-route defects for the audited expansions (no quadrature anywhere):
///   D:  D_i^n f - d_i^n f
///   A:  A_i^n f - f
double defect_D(const ScalarField& f, int i, int n, double h, const Point& x);
double defect_A(const ScalarField& f, int i, int n, double h, const Point& x);

/// Two cross-defect structures. PrintedDecomposition subtracts the stated
/// one-direction remainders of f itself,
///   DD: D_j^m D_i^n f - d_j^m d_i^n f - (D_i^n f - d_i^n f) - (D_j^m f - d_j^m f),
/// which closes only for fields with d_i^n f = f. Rectangle subtracts the
/// one-direction expansions applied where the algebra puts them,
///   DD: D_j^m D_i^n f - D_j^m d_i^n f - d_j^m D_i^n f + d_j^m d_i^n f,
/// and equals the composed remainder R_j(R_i(f)) for every smooth f. For AA
/// and AD the two structures coincide:
///   AA: A_j^m A_i^n f - A_i^n f - A_j^m f + f
///   AD: A_j^m D_i^n f - D_i^n f - A_j^m d_i^n f + d_i^n f
enum class CrossDefect { PrintedDecomposition, Rectangle };
double defect_cross(const ScalarField& f, CrossKind kind, int i, int j, int n, int m, double h,
                    const Point& x, CrossDefect form = CrossDefect::Rectangle);

// ---------------------------------------------------------------------------
// Audits
// ---------------------------------------------------------------------------

enum class AuditVerdict {
    Match,         // |formula - defect| <= max(1e-10, 1e-6 |defect|) at every point
    TypoConfirmed, // mismatch, but formula/defect is a stable constant (+-1%)
    Mismatch,      // mismatch with unstable ratio
};

std::string to_string(AuditVerdict v);

struct AuditRow {
    Point x;
    double defect = 0.0;
    double formula = 0.0;
    double discrepancy = 0.0;
    double ratio = 0.0; // formula / defect
    double quad_error = 0.0;
};

struct AuditReport {
    std::string id;          // e.g. "D n=2 on exp(x0)"
    std::string kind;        // D, A, AA, DD, AD (+ variant)
    std::string field_name;
    int n = 0, m = 0;
    double h = 0.0;
    AuditVerdict verdict = AuditVerdict::Mismatch;
    double max_discrepancy = 0.0;
    double ratio_mean = 0.0;
    double ratio_spread = 0.0; // (max-min)/|mean|
    std::vector<AuditRow> rows;
    std::string note;

    bool acceptable() const { return verdict != AuditVerdict::Mismatch; }
};

/// Compares an integral remainder formula against the stencil defect at the
/// given points. Tolerance per point: max(1e-10, 1e-6 |defect|). On failure
/// the measured formula/defect ratios are recorded; a stable ratio is
/// reported as a confirmed transcription constant rather than silently
/// accepted or rejected.
AuditReport audit_remainder_D(const ScalarField& f, std::string field_name, int i, int n, double h,
                              const std::vector<Point>& points, const QuadratureSpec& q);
AuditReport audit_remainder_A(const ScalarField& f, std::string field_name, int i, int n, double h,
                              const std::vector<Point>& points, const QuadratureSpec& q);
AuditReport audit_remainder_cross(const ScalarField& f, std::string field_name, CrossKind kind,
                                  CrossVariant variant, int i, int j, int n, int m, double h,
                                  const std::vector<Point>& points, const QuadratureSpec& q);

} // namespace carleman

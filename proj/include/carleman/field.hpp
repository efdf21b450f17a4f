#pragma once

// Scalar fields as immutable jet programs. A field is evaluated either
// pointwise or as a Jet with a chosen set of active dimensions and order cap,
// which makes every mixed partial of every composite expression exact.
// Discrete operators (translations, differences, averages) are layered on top
// as field-to-field combinators in ops.hpp; they evaluate the underlying
// program at exactly the staggered points they need, so no grid storage or
// parity bookkeeping ever appears.
//
// Points are carried in R^{d+1}: d space coordinates followed by one time
// slot. Purely spatial fields ignore the time coordinate.

#include "carleman/jet.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <string>

namespace carleman {

using DimList = std::vector<int>;

/// Program evaluated in jet arithmetic; receives one seed jet per ambient
/// coordinate (space dims first, time slot last).
using JetProgram = std::function<Jet(std::span<const Jet>)>;

namespace detail {

class FieldImpl {
public:
    FieldImpl(int space_dim, bool time_dep, double margin, int order_cap)
        : space_dim_(space_dim), time_dep_(time_dep), margin_(margin), order_cap_(order_cap) {}
    virtual ~FieldImpl() = default;

    virtual Jet eval_jet(const Point& x, const DimList& dims, int cap) const = 0;

    int space_dim() const { return space_dim_; }
    int ambient_dim() const { return space_dim_ + 1; }
    bool time_dependent() const { return time_dep_; }
    double margin() const { return margin_; }
    int order_cap() const { return order_cap_; }

protected:
    int space_dim_;
    bool time_dep_;
    double margin_;
    int order_cap_;
};

} // namespace detail

/// Value-semantic handle to an immutable field. Copies are cheap and all
/// evaluation is pure, so fields may be shared and evaluated concurrently.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(std::shared_ptr<const detail::FieldImpl> impl) : impl_(std::move(impl)) {}

    /// Field defined by a jet program. `margin` is the evaluable distance
    /// beyond the closed unit box (infinite for globally analytic formulas).
    static ScalarField from_program(int space_dim, bool time_dependent, JetProgram program,
                                    int order_cap = 10,
                                    double margin = std::numeric_limits<double>::infinity());

    static ScalarField constant(int space_dim, double value);
    /// The coordinate function x_i (or t for i == space_dim).
    static ScalarField coordinate(int space_dim, int i);

    double eval(const Point& x) const { return eval_jet(x, {}, 0).value(); }
    double operator()(const Point& x) const { return eval(x); }

    Jet eval_jet(const Point& x, const DimList& active_dims, int cap) const;

    int space_dim() const { return impl().space_dim(); }
    int ambient_dim() const { return impl().ambient_dim(); }
    bool time_dependent() const { return impl().time_dependent(); }
    double margin() const { return impl().margin(); }
    int order_cap() const { return impl().order_cap(); }
    bool valid() const { return static_cast<bool>(impl_); }

    const detail::FieldImpl& impl() const {
        if (!impl_) throw std::logic_error("ScalarField: empty handle");
        return *impl_;
    }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(double s, const ScalarField& f);

private:
    std::shared_ptr<const detail::FieldImpl> impl_;
};

/// f shifted by `delta` along coordinate `dim`: x -> f(x + delta e_dim).
/// Throws if the shift exhausts the field's domain margin.
ScalarField shift(const ScalarField& f, int dim, double delta);

/// Analytic derivative d^alpha f as a field (alpha over the ambient
/// coordinates; the last entry differentiates in time). Exact via jets.
ScalarField deriv(const ScalarField& f, const MultiIndex& alpha_ambient);

/// Convenience: spatial multi-index, zero time entry appended.
ScalarField deriv_space(const ScalarField& f, const MultiIndex& alpha_space);

/// d/dt as a field.
ScalarField deriv_time(const ScalarField& f);

/// Exact mixed spatial partial of f at x (via jets).
/// Throws when |alpha| exceeds the field's order cap or when x lies outside
/// the field's evaluable neighborhood.
double derivative(const ScalarField& f, const MultiIndex& alpha_space, const Point& x);

/// General linear combination sum_k w_k * f_k(x + offset_k e_dim), the
/// building block for all stencil operators. Coefficient accumulation is
/// compensated (Neumaier) per Taylor coefficient.
struct StencilTap {
    double offset = 0.0;
    double weight = 1.0;
};
ScalarField stencil(const ScalarField& f, int dim, std::vector<StencilTap> taps);

/// L-inf distance from the spatial part of x to the closed unit box.
double box_distance(const Point& x, int space_dim);

} // namespace carleman

#include "carleman/field.hpp"

#include <algorithm>
#include <cmath>

namespace carleman {

namespace {

using detail::FieldImpl;

DimList merge_dims(DimList a, const DimList& b) {
    for (int d : b)
        if (std::find(a.begin(), a.end(), d) == a.end()) a.push_back(d);
    std::sort(a.begin(), a.end());
    return a;
}

/// Per-coefficient compensated jet accumulator for stencil sums, where the
/// alternating weights of high-order differences cancel catastrophically.
class JetAccumulator {
public:
    void add(const Jet& j, double w) {
        if (!init_) {
            center_ = j.center();
            cap_ = j.order_cap();
            init_ = true;
        }
        for (const auto& [k, v] : j.coeffs()) acc_[k].add(w * v);
    }
    Jet result(const Point& fallback_center, int fallback_cap) const {
        Jet r(init_ ? center_ : fallback_center, init_ ? cap_ : fallback_cap);
        for (const auto& [k, s] : acc_) {
            const double v = s.value();
            if (v != 0.0) r.set_coeff(k, v);
        }
        return r;
    }

private:
    bool init_ = false;
    Point center_;
    int cap_ = 0;
    std::map<MultiIndex, KahanSum> acc_;
};

class ProgramField final : public FieldImpl {
public:
    ProgramField(int space_dim, bool time_dep, JetProgram prog, int order_cap, double margin)
        : FieldImpl(space_dim, time_dep, margin, order_cap), prog_(std::move(prog)) {}

    Jet eval_jet(const Point& x, const DimList& dims, int cap) const override {
        if (static_cast<int>(x.size()) != ambient_dim())
            throw std::invalid_argument("ScalarField: point has wrong ambient dimension");
        if (cap > order_cap_)
            throw std::invalid_argument("ScalarField: requested order exceeds the field's order cap");
        if (box_distance(x, space_dim_) > margin_)
            throw std::domain_error("ScalarField: point outside the evaluable neighborhood");
        std::vector<Jet> seeds;
        seeds.reserve(x.size());
        for (int i = 0; i < ambient_dim(); ++i) {
            const bool active = std::find(dims.begin(), dims.end(), i) != dims.end();
            Jet s(x, cap, x[i]);
            if (active && cap >= 1) s.set_coeff(MultiIndex::unit(ambient_dim(), i), 1.0);
            seeds.push_back(std::move(s));
        }
        return prog_(seeds);
    }

private:
    JetProgram prog_;
};

class BinaryField final : public FieldImpl {
public:
    enum class Op { Add, Sub, Mul };
    BinaryField(Op op, ScalarField a, ScalarField b)
        : FieldImpl(a.space_dim(), a.time_dependent() || b.time_dependent(),
                    std::min(a.margin(), b.margin()), std::min(a.order_cap(), b.order_cap())),
          op_(op), a_(std::move(a)), b_(std::move(b)) {
        if (a_.space_dim() != b_.space_dim())
            throw std::invalid_argument("ScalarField: operand space dimensions differ");
    }

    Jet eval_jet(const Point& x, const DimList& dims, int cap) const override {
        const Jet ja = a_.eval_jet(x, dims, cap);
        const Jet jb = b_.eval_jet(x, dims, cap);
        switch (op_) {
            case Op::Add: return ja + jb;
            case Op::Sub: return ja - jb;
            default: return ja * jb;
        }
    }

private:
    Op op_;
    ScalarField a_, b_;
};

class ScaledField final : public FieldImpl {
public:
    ScaledField(double s, ScalarField f)
        : FieldImpl(f.space_dim(), f.time_dependent(), f.margin(), f.order_cap()),
          s_(s), f_(std::move(f)) {}

    Jet eval_jet(const Point& x, const DimList& dims, int cap) const override {
        return f_.eval_jet(x, dims, cap) * s_;
    }

private:
    double s_;
    ScalarField f_;
};

class ShiftField final : public FieldImpl {
public:
    ShiftField(ScalarField f, int dim, double delta)
        : FieldImpl(f.space_dim(), f.time_dependent() || dim == f.space_dim(),
                    f.margin() - std::abs(delta), f.order_cap()),
          f_(std::move(f)), dim_(dim), delta_(delta) {
        if (dim < 0 || dim > f_.space_dim())
            throw std::invalid_argument("shift: invalid coordinate index");
        if (margin_ < 0.0)
            throw std::domain_error("shift: translation reach exceeds the field's domain margin");
    }

    Jet eval_jet(const Point& x, const DimList& dims, int cap) const override {
        Point y = x;
        y[dim_] += delta_;
        Jet j = f_.eval_jet(y, dims, cap);
        return recenter(j, x);
    }

    /// The jet of x -> f(x + delta e_dim) at x has the same coefficients as
    /// the jet of f at the shifted center; only the recorded center moves.
    static Jet recenter(const Jet& j, const Point& x) {
        Jet r(x, j.order_cap());
        for (const auto& [k, v] : j.coeffs()) r.set_coeff(k, v);
        return r;
    }

private:
    ScalarField f_;
    int dim_;
    double delta_;
};

class DerivField final : public FieldImpl {
public:
    DerivField(ScalarField f, MultiIndex alpha)
        : FieldImpl(f.space_dim(), f.time_dependent() || alpha.entries().back() > 0,
                    f.margin(), f.order_cap() - alpha.order()),
          f_(std::move(f)), alpha_(std::move(alpha)) {
        if (alpha_.dim() != f_.ambient_dim())
            throw std::invalid_argument("deriv: multi-index dimension mismatch");
        if (order_cap_ < 0)
            throw std::invalid_argument("deriv: derivative order exceeds the field's order cap");
    }

    Jet eval_jet(const Point& x, const DimList& dims, int cap) const override {
        DimList need;
        for (int i = 0; i < alpha_.dim(); ++i)
            if (alpha_[i] > 0) need.push_back(i);
        const Jet base = f_.eval_jet(x, merge_dims(need, dims), cap + alpha_.order());
        Jet r(x, cap);
        for (const auto& [k, v] : base.coeffs()) {
            if (!k.contains(alpha_)) continue;
            const MultiIndex beta = k - alpha_;
            if (beta.order() > cap) continue;
            // Taylor coefficient of d^alpha f at beta: (beta+alpha)!/beta! * c_{beta+alpha}
            r.set_coeff(beta, v * k.factorial() / beta.factorial());
        }
        return r;
    }

private:
    ScalarField f_;
    MultiIndex alpha_;
};

class StencilField final : public FieldImpl {
public:
    StencilField(ScalarField f, int dim, std::vector<StencilTap> taps)
        : FieldImpl(f.space_dim(), f.time_dependent() || dim == f.space_dim(),
                    f.margin(), f.order_cap()),
          f_(std::move(f)), dim_(dim), taps_(std::move(taps)) {
        if (dim < 0 || dim > f_.space_dim())
            throw std::invalid_argument("stencil: invalid coordinate index");
        double reach = 0.0;
        for (const auto& t : taps_) reach = std::max(reach, std::abs(t.offset));
        margin_ -= reach;
        if (margin_ < 0.0)
            throw std::domain_error("stencil: operator reach exceeds the field's domain margin");
    }

    Jet eval_jet(const Point& x, const DimList& dims, int cap) const override {
        JetAccumulator acc;
        for (const auto& t : taps_) {
            Point y = x;
            y[dim_] += t.offset;
            acc.add(ShiftField::recenter(f_.eval_jet(y, dims, cap), x), t.weight);
        }
        return acc.result(x, cap);
    }

private:
    ScalarField f_;
    int dim_;
    std::vector<StencilTap> taps_;
};

} // namespace

ScalarField ScalarField::from_program(int space_dim, bool time_dependent, JetProgram program,
                                      int order_cap, double margin) {
    return ScalarField(std::make_shared<ProgramField>(space_dim, time_dependent,
                                                      std::move(program), order_cap, margin));
}

ScalarField ScalarField::constant(int space_dim, double value) {
    return from_program(space_dim, false,
                        [value](std::span<const Jet> x) { return Jet(x[0].center(), x[0].order_cap(), value); },
                        32);
}

ScalarField ScalarField::coordinate(int space_dim, int i) {
    if (i < 0 || i > space_dim) throw std::invalid_argument("coordinate: invalid index");
    return from_program(space_dim, i == space_dim,
                        [i](std::span<const Jet> x) { return x[i]; }, 32);
}

Jet ScalarField::eval_jet(const Point& x, const DimList& active_dims, int cap) const {
    return impl().eval_jet(x, active_dims, cap);
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return ScalarField(std::make_shared<BinaryField>(BinaryField::Op::Add, a, b));
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return ScalarField(std::make_shared<BinaryField>(BinaryField::Op::Sub, a, b));
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return ScalarField(std::make_shared<BinaryField>(BinaryField::Op::Mul, a, b));
}
ScalarField operator*(double s, const ScalarField& f) {
    return ScalarField(std::make_shared<ScaledField>(s, f));
}

ScalarField shift(const ScalarField& f, int dim, double delta) {
    if (delta == 0.0) return f;
    return ScalarField(std::make_shared<ShiftField>(f, dim, delta));
}

ScalarField deriv(const ScalarField& f, const MultiIndex& alpha_ambient) {
    if (alpha_ambient.order() == 0) return f;
    return ScalarField(std::make_shared<DerivField>(f, alpha_ambient));
}

ScalarField deriv_space(const ScalarField& f, const MultiIndex& alpha_space) {
    if (alpha_space.dim() != f.space_dim())
        throw std::invalid_argument("deriv_space: multi-index dimension mismatch");
    std::vector<int> e = alpha_space.entries();
    e.push_back(0);
    return deriv(f, MultiIndex(std::move(e)));
}

ScalarField deriv_time(const ScalarField& f) {
    return deriv(f, MultiIndex::unit(f.ambient_dim(), f.space_dim()));
}

double derivative(const ScalarField& f, const MultiIndex& alpha_space, const Point& x) {
    std::vector<int> e = alpha_space.entries();
    if (static_cast<int>(e.size()) == f.space_dim())
        e.push_back(0);
    else if (static_cast<int>(e.size()) != f.ambient_dim())
        throw std::invalid_argument("derivative: multi-index dimension mismatch");
    const MultiIndex a(std::move(e));
    DimList dims;
    for (int i = 0; i < a.dim(); ++i)
        if (a[i] > 0) dims.push_back(i);
    return f.eval_jet(x, dims, a.order()).derivative(a);
}

ScalarField stencil(const ScalarField& f, int dim, std::vector<StencilTap> taps) {
    return ScalarField(std::make_shared<StencilField>(f, dim, std::move(taps)));
}

double box_distance(const Point& x, int space_dim) {
    double d = 0.0;
    for (int i = 0; i < space_dim; ++i)
        d = std::max({d, -x[i], x[i] - 1.0});
    return d;
}

} // namespace carleman

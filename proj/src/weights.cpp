#include "carleman/weights.hpp"

#include <cmath>
#include <sstream>

namespace carleman {

namespace {

/// psi jet program shared by the presets. Seeds arrive as (x_1..x_d, t).
Jet psi_jet(const WeightSpec& spec, std::span<const Jet> x) {
    const int d = spec.dim;
    if (spec.psi_preset == WeightSpec::Psi::Poly) {
        // Shifted paraboloid. The defaults keep psi small (so e^{s phi} stays
        // representable across the s sweeps) with a gradient bounded away
        // from zero on the closed box.
        Jet acc(x[0].center(), x[0].order_cap(), spec.psi_c);
        for (int i = 0; i < d; ++i) {
            const double a = spec.psi_a.empty() ? 0.25 : spec.psi_a[i];
            const double b = spec.psi_b.empty() ? 0.5 : spec.psi_b[i];
            const Jet u = x[i] + b;
            acc = acc + (u * u) * a;
        }
        return acc;
    }
    // |x - x*|^2 - beta t^2 + c0
    Jet acc(x[0].center(), x[0].order_cap(), spec.c0);
    for (int i = 0; i < d; ++i) {
        const Jet u = x[i] - spec.x_star[i];
        acc = acc + u * u;
    }
    const Jet& t = x[d];
    return acc - (t * t) * spec.beta;
}

/// s(t) as a jet: the constant s, or tau / ((t + dT)(T + dT - t)).
Jet s_jet(const WeightSpec& spec, std::span<const Jet> x) {
    const Jet& t = x[spec.dim];
    if (spec.s_mode == WeightSpec::SMode::Constant)
        return Jet(t.center(), t.order_cap(), spec.s);
    const double dT = spec.delta * spec.T;
    const Jet p = (t + dT) * ((t * -1.0) + (spec.T + dT));
    return jet_inv(p) * spec.tau;
}

WeightFields build(const WeightSpec& spec) {
    const int d = spec.dim;
    const bool tdep = spec.time_dependent();
    const bool psi_tdep = spec.psi_preset == WeightSpec::Psi::Hyperbolic;

    WeightFields w;
    w.spec = spec;
    w.psi = ScalarField::from_program(
        d, psi_tdep, [spec](std::span<const Jet> x) { return psi_jet(spec, x); });
    w.phi = ScalarField::from_program(
        d, psi_tdep, [spec](std::span<const Jet> x) { return jet_exp(psi_jet(spec, x) * spec.lambda); });
    w.r = ScalarField::from_program(d, tdep, [spec](std::span<const Jet> x) {
        return jet_exp(s_jet(spec, x) * jet_exp(psi_jet(spec, x) * spec.lambda));
    });
    w.rho = ScalarField::from_program(d, tdep, [spec](std::span<const Jet> x) {
        return jet_exp(s_jet(spec, x) * jet_exp(psi_jet(spec, x) * spec.lambda) * -1.0);
    });
    return w;
}

} // namespace

void WeightSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("WeightSpec: dim must be >= 1");
    if (!(lambda >= 1.0)) throw std::invalid_argument("WeightSpec: lambda must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("WeightSpec: T must be positive");
    if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("WeightSpec: delta must lie in (0, 1/2]");
    if (s_mode == SMode::Constant && !(s >= 1.0))
        throw std::invalid_argument("WeightSpec: constant mode requires s >= 1");
    if (s_mode == SMode::TimeDependent && !(tau >= 1.0))
        throw std::invalid_argument("WeightSpec: time-dependent mode requires tau >= 1");
    if (psi_preset == Psi::Poly) {
        if (!psi_a.empty() && static_cast<int>(psi_a.size()) != dim)
            throw std::invalid_argument("WeightSpec: psi_a dimension mismatch");
        if (!psi_b.empty() && static_cast<int>(psi_b.size()) != dim)
            throw std::invalid_argument("WeightSpec: psi_b dimension mismatch");
    }
    if (psi_preset == Psi::Hyperbolic) {
        if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("WeightSpec: beta must lie in (0,1)");
        if (!(c0 > 0.0)) throw std::invalid_argument("WeightSpec: c0 must be positive");
        if (static_cast<int>(x_star.size()) != dim)
            throw std::invalid_argument("WeightSpec: x_star dimension mismatch");
        bool outside = false;
        for (int i = 0; i < dim; ++i)
            if (x_star[i] < 0.0 || x_star[i] > 1.0) outside = true;
        if (!outside) throw std::invalid_argument("WeightSpec: x_star must lie outside the closed unit box");

        // psi >= 1 on [-T,T] x box, checked by sampling.
        const int nx = 5, nt = 9;
        std::vector<int> idx(dim, 0);
        for (;;) {
            Point p(dim + 1, 0.0);
            for (int i = 0; i < dim; ++i) p[i] = idx[i] / double(nx - 1);
            for (int k = 0; k < nt; ++k) {
                const double t = -T + 2.0 * T * k / (nt - 1);
                double dist2 = 0.0;
                for (int i = 0; i < dim; ++i) dist2 += (p[i] - x_star[i]) * (p[i] - x_star[i]);
                if (dist2 - beta * t * t + c0 < 1.0 - 1e-12)
                    throw std::invalid_argument("WeightSpec: hyperbolic psi drops below 1 on the space-time box");
            }
            int i = 0;
            while (i < dim && ++idx[i] == nx) idx[i++] = 0;
            if (i == dim) break;
        }
    }
}

double WeightSpec::s_at(double t) const {
    if (s_mode == SMode::Constant) return s;
    return tau * theta(t, delta, T);
}

double WeightSpec::s_max() const {
    if (s_mode == SMode::Constant) return std::abs(s);
    return std::abs(tau) * theta(0.0, delta, T);
}

double theta(double t, double delta, double T) {
    if (!(delta > 0.0) || !(T > 0.0)) throw std::invalid_argument("theta: delta and T must be positive");
    if (t < 0.0 || t > T) throw std::domain_error("theta: t outside [0, T]");
    return 1.0 / ((t + delta * T) * (T + delta * T - t));
}

WeightFields make_weights(const WeightSpec& spec) {
    spec.validate();
    return build(spec);
}

WeightFields WeightFields::swapped() const {
    WeightSpec neg = spec;
    neg.s = -neg.s;
    neg.tau = -neg.tau;
    WeightFields w = build(neg); // bypasses validation: the sign flip is internal
    std::swap(w.r, w.rho);
    return w;
}

std::string RegimeReport::describe() const {
    std::ostringstream os;
    for (size_t i = 0; i < conditions.size(); ++i) {
        const auto& c = conditions[i];
        if (i) os << "; ";
        os << c.name << " = " << c.value << " vs " << c.bound << (c.pass ? " OK" : " VIOLATED");
    }
    return os.str();
}

RegimeReport regime_check(const WeightSpec& spec, double h, std::optional<double> dt, double eps) {
    if (!(h > 0.0)) throw std::invalid_argument("regime_check: h must be positive");
    if (dt && !(*dt > 0.0)) throw std::invalid_argument("regime_check: dt must be positive");
    RegimeReport rep;
    if (spec.s_mode == WeightSpec::SMode::Constant) {
        const double sh = std::abs(spec.s) * h;
        rep.conditions.push_back({"s*h <= 1", sh, 1.0, sh <= 1.0});
        if (eps != 1.0) rep.conditions.push_back({"s*h <= eps", sh, eps, sh <= eps});
    } else {
        const double v = std::abs(spec.tau) * h / (spec.delta * spec.T * spec.T);
        rep.conditions.push_back({"tau*h/(delta*T^2) <= 1", v, 1.0, v <= 1.0});
    }
    if (dt) {
        const double tau_eff = spec.s_mode == WeightSpec::SMode::Constant ? spec.s : spec.tau;
        const double v = *dt * std::abs(tau_eff) / (spec.T * spec.T * spec.T * spec.delta * spec.delta);
        rep.conditions.push_back({"dt*tau/(T^3*delta^2) <= 1/2", v, 0.5, v <= 0.5});
    }
    return rep;
}

} // namespace carleman

#pragma once

// Truncated multivariate Taylor arithmetic. A Jet carries the Taylor
// coefficients c_alpha = d^alpha f / alpha! of a function at a fixed center,
// for every |alpha| <= order_cap. Arithmetic is closed under the cap, so any
// derivative extracted from a composite expression is exact for that
// expression (no series-truncation tolerance anywhere).

#include "carleman/multi_index.hpp"
#include "carleman/numeric.hpp"

#include <cmath>
#include <map>
#include <span>
#include <vector>

namespace carleman {

using Point = std::vector<double>;

class Jet {
public:
    Jet() = default;

    /// Jet of the constant `value` at `center`.
    Jet(Point center, int order_cap, double value = 0.0)
        : center_(std::move(center)), cap_(order_cap) {
        if (cap_ < 0) throw std::invalid_argument("Jet: negative order cap");
        if (value != 0.0) coeffs_[MultiIndex::zero(dim())] = value;
    }

    int dim() const { return static_cast<int>(center_.size()); }
    int order_cap() const { return cap_; }
    const Point& center() const { return center_; }
    const std::map<MultiIndex, double>& coeffs() const { return coeffs_; }

    /// Taylor coefficient c_alpha (0 when absent or beyond the cap).
    double coeff(const MultiIndex& a) const {
        auto it = coeffs_.find(a);
        return it == coeffs_.end() ? 0.0 : it->second;
    }

    void set_coeff(const MultiIndex& a, double v) {
        if (a.dim() != dim()) throw std::invalid_argument("Jet: coefficient index dimension mismatch");
        if (a.order() > cap_) throw std::invalid_argument("Jet: coefficient index beyond order cap");
        if (v == 0.0)
            coeffs_.erase(a);
        else
            coeffs_[a] = v;
    }

    double value() const { return coeff(MultiIndex::zero(dim())); }

    /// Exact mixed partial d^alpha at the center: alpha! * c_alpha.
    double derivative(const MultiIndex& a) const {
        if (a.order() > cap_) throw std::invalid_argument("Jet: derivative order beyond cap");
        return a.factorial() * coeff(a);
    }

    bool compatible(const Jet& o) const { return cap_ == o.cap_ && center_ == o.center_; }

    friend Jet operator+(const Jet& a, const Jet& b) {
        a.require_compatible(b);
        Jet r = a;
        for (const auto& [k, v] : b.coeffs_) {
            double& slot = r.coeffs_[k];
            slot += v;
            if (slot == 0.0) r.coeffs_.erase(k);
        }
        return r;
    }

    friend Jet operator-(const Jet& a, const Jet& b) { return a + (b * -1.0); }

    friend Jet operator*(const Jet& a, double s) {
        Jet r = a;
        if (s == 0.0) {
            r.coeffs_.clear();
            return r;
        }
        for (auto& [k, v] : r.coeffs_) v *= s;
        return r;
    }
    friend Jet operator*(double s, const Jet& a) { return a * s; }

    friend Jet operator+(const Jet& a, double c) {
        Jet r = a;
        r.set_coeff(MultiIndex::zero(a.dim()), r.value() + c);
        return r;
    }
    friend Jet operator+(double c, const Jet& a) { return a + c; }
    friend Jet operator-(const Jet& a, double c) { return a + (-c); }

    /// Truncated Cauchy product.
    friend Jet operator*(const Jet& a, const Jet& b) {
        a.require_compatible(b);
        Jet r(a.center_, a.cap_);
        for (const auto& [ka, va] : a.coeffs_) {
            for (const auto& [kb, vb] : b.coeffs_) {
                if (ka.order() + kb.order() > a.cap_) continue;
                r.coeffs_[ka + kb] += va * vb;
            }
        }
        r.prune();
        return r;
    }

private:
    void require_compatible(const Jet& o) const {
        if (!compatible(o)) throw std::invalid_argument("Jet: center/order-cap mismatch");
    }
    void prune() {
        for (auto it = coeffs_.begin(); it != coeffs_.end();)
            it = (it->second == 0.0) ? coeffs_.erase(it) : std::next(it);
    }

    friend Jet jet_exp(const Jet&);
    friend Jet jet_inv(const Jet&);

    Point center_;
    int cap_ = 0;
    std::map<MultiIndex, double> coeffs_;
};

/// Seed jets for the listed coordinates: value = center coordinate,
/// first-order coefficient 1 in the own dimension, everything else 0.
inline std::vector<Jet> jet_var(const Point& center, std::span<const int> active_dims, int order_cap) {
    std::vector<Jet> seeds;
    seeds.reserve(active_dims.size());
    const int d = static_cast<int>(center.size());
    for (int i : active_dims) {
        if (i < 0 || i >= d) throw std::invalid_argument("jet_var: invalid dimension index");
        Jet j(center, order_cap, center[i]);
        if (order_cap >= 1) j.set_coeff(MultiIndex::unit(d, i), 1.0);
        seeds.push_back(std::move(j));
    }
    return seeds;
}

inline Jet jet_add(const Jet& a, const Jet& b) { return a + b; }
inline Jet jet_mul(const Jet& a, const Jet& b) { return a * b; }
inline Jet jet_scale(const Jet& a, double s) { return a * s; }

/// exp of a jet via the graded recurrence d(e^u) = u' e^u: with w = e^u,
///   g_i * w_g = sum_{0 < b <= g, b_i > 0} b_i * u_b * w_{g-b}
/// solved in order of total degree (i = first direction with g_i > 0).
/// Exact at the cap; no series summation is involved.
inline Jet jet_exp(const Jet& u) {
    Jet w(u.center_, u.cap_);
    const int d = u.dim();
    const double w0 = std::exp(u.value());
    w.coeffs_[MultiIndex::zero(d)] = w0;

    // Group the input coefficients by total degree for the graded sweep.
    std::vector<std::vector<std::pair<MultiIndex, double>>> by_deg(u.cap_ + 1);
    for (const auto& [k, v] : u.coeffs_)
        if (k.order() >= 1) by_deg[k.order()].emplace_back(k, v);

    // Enumerate target indices in graded order; std::map with the graded
    // comparison would also do, but we need all |g| = deg targets including
    // absent ones, so walk the simplex explicitly.
    std::vector<MultiIndex> frontier{MultiIndex::zero(d)};
    for (int deg = 1; deg <= u.cap_; ++deg) {
        std::vector<MultiIndex> next;
        std::map<MultiIndex, bool> seen;
        for (const auto& g : frontier) {
            for (int i = 0; i < d; ++i) {
                MultiIndex cand = g + MultiIndex::unit(d, i);
                if (seen.emplace(cand, true).second) next.push_back(cand);
            }
        }
        for (const auto& g : next) {
            int i = 0;
            while (g[i] == 0) ++i;
            KahanSum acc;
            for (int bdeg = 1; bdeg <= deg; ++bdeg) {
                for (const auto& [b, ub] : by_deg[bdeg]) {
                    if (b[i] == 0 || !g.contains(b)) continue;
                    const double wg = w.coeff(g - b);
                    if (wg != 0.0) acc.add(b[i] * ub * wg);
                }
            }
            const double val = acc.value() / g[i];
            if (val != 0.0) w.coeffs_[g] = val;
        }
        frontier = std::move(next);
    }
    return w;
}

/// Reciprocal of a jet with nonzero value, from u * w = 1 solved by degree.
inline Jet jet_inv(const Jet& u) {
    const double u0 = u.value();
    if (u0 == 0.0) throw std::domain_error("jet_inv: zero constant term");
    Jet w(u.center_, u.cap_);
    const int d = u.dim();
    w.coeffs_[MultiIndex::zero(d)] = 1.0 / u0;

    std::vector<MultiIndex> frontier{MultiIndex::zero(d)};
    for (int deg = 1; deg <= u.cap_; ++deg) {
        std::vector<MultiIndex> next;
        std::map<MultiIndex, bool> seen;
        for (const auto& g : frontier)
            for (int i = 0; i < d; ++i) {
                MultiIndex cand = g + MultiIndex::unit(d, i);
                if (seen.emplace(cand, true).second) next.push_back(cand);
            }
        for (const auto& g : next) {
            KahanSum acc;
            for (const auto& [b, ub] : u.coeffs_) {
                if (b.order() < 1 || b.order() > deg || !g.contains(b)) continue;
                const double wg = w.coeff(g - b);
                if (wg != 0.0) acc.add(ub * wg);
            }
            const double val = -acc.value() / u0;
            if (val != 0.0) w.coeffs_[g] = val;
        }
        frontier = std::move(next);
    }
    return w;
}

} // namespace carleman

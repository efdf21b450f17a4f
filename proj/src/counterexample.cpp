#include "carleman/counterexample.hpp"

#include "carleman/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carleman {

GridFunction2D::GridFunction2D(int M) : M_(M) {
    if (M < 1) throw std::invalid_argument("GridFunction2D: M must be >= 1");
    v_.assign(static_cast<size_t>(M + 2) * (M + 2), 0.0);
}

double& GridFunction2D::at(int i, int j) {
    if (i < 0 || i > M_ + 1 || j < 0 || j > M_ + 1)
        throw std::out_of_range("GridFunction2D: index out of range");
    return v_[static_cast<size_t>(i) * (M_ + 2) + j];
}

double GridFunction2D::at(int i, int j) const { return const_cast<GridFunction2D*>(this)->at(i, j); }

double GridFunction2D::norm_inf() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

double GridFunction2D::norm_l2() const {
    KahanSum s;
    for (int i = 1; i <= M_; ++i)
        for (int j = 1; j <= M_; ++j) s.add(at(i, j) * at(i, j));
    return std::sqrt(h() * h() * s.value());
}

void GridFunction2D::enforce_boundary() {
    for (int k = 0; k <= M_ + 1; ++k) {
        at(0, k) = at(M_ + 1, k) = 0.0;
        at(k, 0) = at(k, M_ + 1) = 0.0;
    }
}

GridFunction2D laplacian5(const GridFunction2D& q) {
    const int M = q.M();
    const double inv_h2 = 1.0 / (q.h() * q.h());
    GridFunction2D out(M);
    for (int i = 1; i <= M; ++i)
        for (int j = 1; j <= M; ++j)
            out.at(i, j) = (q.at(i + 1, j) + q.at(i, j + 1) + q.at(i - 1, j) + q.at(i, j - 1) -
                            4.0 * q.at(i, j)) *
                           inv_h2;
    return out;
}

GridFunction2D build_checkerboard(int M) {
    if (M < 2) throw std::invalid_argument("build_checkerboard: M must be >= 2");
    GridFunction2D q(M);
    for (int i = 1; i <= M; ++i) q.at(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
    return q;
}

double amplification_base(double alpha, double dt) {
    const double x = alpha * dt;
    if (!(x > 0.0) || x >= 1.0)
        throw std::domain_error("amplification_base: alpha*dt must lie in (0, 1)");
    // a = (1/(1-x))^{1/x} = exp(-log1p(-x)/x)
    return std::exp(-std::log1p(-x) / x);
}

ExactSolution::ExactSolution(int M, int N, double T)
    : pattern_(build_checkerboard(M)), time_{N, T} {
    if (N < 1 || !(T > 0.0)) throw std::invalid_argument("ExactSolution: invalid time grid");
    const double h = pattern_.h();
    alpha_ = 4.0 / (h * h);
    if (!(alpha_ * time_.dt() < 1.0))
        throw std::domain_error("ExactSolution: alpha*dt must stay below 1 (refine the time grid)");
    a_ = amplification_base(alpha_, time_.dt());
}

ExactSolution ExactSolution::with_default_grid(int M, double T) {
    // N = 8 (M+1)^2 T gives alpha dt = 1/2 (exact whenever the product is
    // integral), hence a = 4.
    const double n = 8.0 * (M + 1) * (M + 1) * T;
    return ExactSolution(M, static_cast<int>(std::lround(std::ceil(n))), T);
}

double ExactSolution::log_amplitude(double t) const {
    return -alpha_ * (time_.T - t) * std::log(a_);
}

GridFunction2D ExactSolution::grid(double t) const {
    GridFunction2D g(pattern_.M());
    const double amp = std::exp(log_amplitude(t));
    for (int i = 1; i <= pattern_.M(); ++i) g.at(i, i) = amp * pattern_.at(i, i);
    return g;
}

double ExactSolution::log_norm_inf(double t) const { return log_amplitude(t); }

double ExactSolution::log_norm_l2(double t) const {
    const double h = pattern_.h();
    return log_amplitude(t) + 0.5 * std::log(h * h * pattern_.M());
}

double ExactSolution::scheme_residual(int j) const {
    if (j < 0 || j >= time_.N) throw std::out_of_range("scheme_residual: node index");
    // D_t q + Delta_h tau^+ q = e^{A(t+dt/2)} [ (1 - a^{-alpha dt})/(alpha dt) - 1 ] alpha q~
    // once Delta_h q~ = -alpha q~ holds exactly (checked by the demo).
    const double x = alpha_ * time_.dt();
    const double g = (1.0 - std::exp(-x * std::log(a_))) / x - 1.0;
    return std::abs(g);
}

bool IndexRect::intersects_diagonal(int M) const {
    const int lo = std::max({i0, j0, 1});
    const int hi = std::min({i1, j1, M});
    return lo <= hi;
}

std::string IndexRect::str() const {
    std::ostringstream os;
    os << i0 << ":" << i1 << "," << j0 << ":" << j1;
    return os.str();
}

ObservabilityReport observability_demo(const std::vector<int>& M_list, const IndexRect& omega,
                                       double T, double alpha_dt_target) {
    if (M_list.empty()) throw std::invalid_argument("observability_demo: empty M list");
    if (!(alpha_dt_target > 0.0 && alpha_dt_target < 1.0))
        throw std::invalid_argument("observability_demo: alpha*dt target must lie in (0,1)");

    ObservabilityReport rep;
    rep.omega = omega;
    rep.T = T;

    std::vector<double> xs, ys;
    bool ok = true;
    for (int M : M_list) {
        if (omega.i0 < 1 || omega.j0 < 1 || omega.i1 > M || omega.j1 > M || omega.i0 > omega.i1 ||
            omega.j0 > omega.j1)
            throw std::invalid_argument("observability_demo: omega is not an interior rectangle for M=" +
                                        std::to_string(M));
        const double alpha = 4.0 * (M + 1) * (M + 1);
        const int N = static_cast<int>(std::lround(std::ceil(alpha * T / alpha_dt_target)));
        ExactSolution sol(M, N, T);

        ObservabilityRow row;
        row.M = M;
        row.h = sol.pattern().h();
        row.alpha_dt = sol.alpha_dt();
        row.base = sol.base();
        row.log10_q0_norm = sol.log_norm_l2(0.0) / std::log(10.0);
        row.log10_ratio_0_T = (sol.log_norm_l2(0.0) - sol.log_norm_l2(T)) / std::log(10.0);
        row.scheme_residual = sol.scheme_residual(0);

        // Eigen-identity residual, exact-zero by integer cancellation.
        GridFunction2D lap = laplacian5(sol.pattern());
        double eig = 0.0;
        for (int i = 1; i <= M; ++i)
            for (int j = 1; j <= M; ++j)
                eig = std::max(eig, std::abs(lap.at(i, j) + alpha * sol.pattern().at(i, j)));
        row.eigen_residual = eig;
        if (eig != 0.0) ok = false;

        // Spatial mass of the pattern inside omega (counts diagonal nodes).
        int diag_nodes = 0;
        for (int i = std::max({omega.i0, omega.j0, 1}); i <= std::min({omega.i1, omega.j1, M}); ++i)
            ++diag_nodes;
        const double spa = row.h * row.h * diag_nodes;

        if (diag_nodes == 0) {
            row.omega_norm = 0.0;
            row.omega_norm_exact_zero = true;
            row.ratio = std::numeric_limits<double>::infinity();
        } else {
            // sum_j e^{2A(t_j)} as a geometric series, evaluated in log space
            // anchored at the largest term (j = N-1).
            const double step = 2.0 * sol.alpha_dt() * std::log(sol.base()); // 2 ln(a^{alpha dt})
            const double gin = std::exp(-step);                             // ratio < 1
            const int N_nodes = sol.time().N;
            double tail;
            if (gin < 1.0) {
                const double gpow = std::exp(-step * N_nodes);
                tail = std::log1p(-gpow) - std::log1p(-gin);
            } else {
                tail = std::log(static_cast<double>(N_nodes));
            }
            const double log_sum = 2.0 * sol.log_amplitude(sol.time().node(N_nodes - 1)) + tail;
            const double log_norm = 0.5 * (std::log(sol.time().dt()) + log_sum + std::log(spa));
            row.omega_norm = std::exp(log_norm);
            row.ratio = std::exp(sol.log_norm_l2(0.0) - log_norm);
        }
        if (row.omega_norm_exact_zero != !omega.intersects_diagonal(M)) ok = false;
        if (row.scheme_residual > 1e-11) ok = false;

        xs.push_back(1.0 / (row.h * row.h));
        ys.push_back(row.log10_ratio_0_T);
        rep.rows.push_back(row);
    }

    rep.decay_slope_expected = -4.0 * T * std::log10(rep.rows.front().base);
    if (xs.size() >= 2) {
        auto fit = fit_line(xs, ys);
        rep.decay_slope = fit.slope;
        rep.decay_residual = fit.rms_residual;
        if (std::abs(rep.decay_slope - rep.decay_slope_expected) >
            1e-6 * std::abs(rep.decay_slope_expected))
            ok = false;
    } else {
        rep.decay_slope = ys.front() / xs.front();
    }

    rep.pass = ok;
    rep.verdict = ok ? "PASS" : "FAIL";
    return rep;
}

} // namespace carleman

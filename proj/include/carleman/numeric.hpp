#pragma once

// Small numeric utilities shared across the library: compensated summation,
// double-double arithmetic for catastrophic-cancellation sums, exact integer
// binomials, quasi-random point sets, and log-log least squares.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace carleman {

/// Neumaier compensated accumulator. Sums in any order with an error bound
/// independent of the condition number of the partial sums.
class KahanSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Unevaluated double-double value (hi + lo, |lo| <= ulp(hi)/2).
/// Used where alternating binomial sums cancel to ~1e-9 of the largest term.
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    static DD two_sum(double a, double b) noexcept {
        const double s = a + b;
        const double bb = s - a;
        return {s, (a - (s - bb)) + (b - bb)};
    }
    static DD two_prod(double a, double b) noexcept {
        const double p = a * b;
        return {p, std::fma(a, b, -p)};
    }
    static DD from(double x) noexcept { return {x, 0.0}; }

    DD operator+(const DD& o) const noexcept {
        DD s = two_sum(hi, o.hi);
        s.lo += lo + o.lo;
        return two_sum(s.hi, s.lo);
    }
    DD operator*(const DD& o) const noexcept {
        DD p = two_prod(hi, o.hi);
        p.lo += hi * o.lo + lo * o.hi;
        return two_sum(p.hi, p.lo);
    }
    DD operator*(double x) const noexcept { return *this * from(x); }
    DD operator-() const noexcept { return {-hi, -lo}; }
    double value() const noexcept { return hi + lo; }

    /// x^n by repeated multiplication, n >= 0.
    static DD pow(DD x, int n) {
        DD r = from(1.0);
        while (n > 0) {
            if (n & 1) r = r * x;
            x = x * x;
            n >>= 1;
        }
        return r;
    }
    static DD pow(double x, int n) { return pow(from(x), n); }
};

/// Exact binomial coefficient. Values are exact integers for n <= 20 and are
/// converted to double on return (C(20,10) = 184756 is far below 2^53).
inline double binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0.0;
    if (n > 62) throw std::invalid_argument("binomial: n too large for exact integer arithmetic");
    std::uint64_t r = 1;
    if (k > n - k) k = n - k;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return static_cast<double>(r);
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Halton radical-inverse sequence, one low-discrepancy point per call.
/// `seed` offsets the start index so distinct seeds give distinct point sets
/// while a fixed seed reproduces the set exactly.
class HaltonSequence {
public:
    explicit HaltonSequence(int dim, unsigned seed = 0)
        : dim_(dim), index_(101 + static_cast<std::uint64_t>(seed) * 65537ULL) {
        if (dim < 1 || dim > 8) throw std::invalid_argument("HaltonSequence: dim out of range");
    }

    std::vector<double> next() {
        static constexpr int primes[8] = {2, 3, 5, 7, 11, 13, 17, 19};
        std::vector<double> p(dim_);
        for (int d = 0; d < dim_; ++d) p[d] = radical_inverse(index_, primes[d]);
        ++index_;
        return p;
    }

    /// `count` points mapped affinely into the box [lo, hi]^dim.
    std::vector<std::vector<double>> box(int count, double lo, double hi) {
        std::vector<std::vector<double>> pts;
        pts.reserve(count);
        for (int i = 0; i < count; ++i) {
            auto p = next();
            for (auto& c : p) c = lo + (hi - lo) * c;
            pts.push_back(std::move(p));
        }
        return pts;
    }

private:
    static double radical_inverse(std::uint64_t i, int base) {
        double inv = 1.0 / base, f = inv, x = 0.0;
        while (i > 0) {
            x += f * static_cast<double>(i % base);
            i /= base;
            f *= inv;
        }
        return x;
    }

    int dim_;
    std::uint64_t index_;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

/// Ordinary least squares y ~ slope*x + intercept with RMS residual.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 samples");
    const double n = static_cast<double>(x.size());
    KahanSum sx, sy, sxx, sxy;
    for (size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
        sxx.add(x[i] * x[i]);
        sxy.add(x[i] * y[i]);
    }
    const double det = n * sxx.value() - sx.value() * sx.value();
    if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy.value() - sx.value() * sy.value()) / det;
    f.intercept = (sy.value() - f.slope * sx.value()) / n;
    KahanSum rss;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        rss.add(r * r);
    }
    f.rms_residual = std::sqrt(rss.value() / n);
    return f;
}

} // namespace carleman

#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace carleman {

/// Derivative multi-index alpha = (a_1, ..., a_d), entries >= 0.
/// The order |alpha| is cached on construction and kept consistent by the
/// mutating helpers.
class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
        for (int e : entries_)
            if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
        order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
    }

    MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

    /// Zero multi-index of the given length.
    static MultiIndex zero(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }

    /// n * e_i in `dim` variables.
    static MultiIndex unit(int dim, int i, int n = 1) {
        std::vector<int> e(dim, 0);
        e.at(i) = n;
        return MultiIndex(std::move(e));
    }

    int dim() const { return static_cast<int>(entries_.size()); }
    int order() const { return order_; }
    int operator[](int i) const { return entries_[i]; }
    const std::vector<int>& entries() const { return entries_; }

    MultiIndex operator+(const MultiIndex& o) const {
        check_dim(o);
        std::vector<int> e(entries_);
        for (int i = 0; i < dim(); ++i) e[i] += o.entries_[i];
        return MultiIndex(std::move(e));
    }

    /// Componentwise difference; throws if any entry would go negative.
    MultiIndex operator-(const MultiIndex& o) const {
        check_dim(o);
        std::vector<int> e(entries_);
        for (int i = 0; i < dim(); ++i) {
            e[i] -= o.entries_[i];
            if (e[i] < 0) throw std::invalid_argument("MultiIndex: subtraction underflow");
        }
        return MultiIndex(std::move(e));
    }

    /// Componentwise o <= *this.
    bool contains(const MultiIndex& o) const {
        check_dim(o);
        for (int i = 0; i < dim(); ++i)
            if (o.entries_[i] > entries_[i]) return false;
        return true;
    }

    /// alpha! = prod a_i!
    double factorial() const {
        double f = 1.0;
        for (int e : entries_)
            for (int k = 2; k <= e; ++k) f *= k;
        return f;
    }

    bool operator==(const MultiIndex& o) const = default;
    auto operator<=>(const MultiIndex& o) const {
        if (auto c = order_ <=> o.order_; c != 0) return c; // graded
        return entries_ <=> o.entries_;                     // then lexicographic
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < dim(); ++i) {
            if (i) s += ",";
            s += std::to_string(entries_[i]);
        }
        return s + ")";
    }

    friend std::ostream& operator<<(std::ostream& os, const MultiIndex& m) { return os << m.str(); }

private:
    void check_dim(const MultiIndex& o) const {
        if (o.dim() != dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
    }

    std::vector<int> entries_;
    int order_ = 0;
};

/// Two-dimensional discrete multi-index k = (k_i, k_j) bound to a pair of
/// distinct directions. Used for the composed operators D_h^k and A_h^l.
struct BiIndex {
    int dir_i = 0;
    int dir_j = 1;
    int k_i = 0;
    int k_j = 0;

    BiIndex() = default;
    BiIndex(int di, int dj, int ki, int kj) : dir_i(di), dir_j(dj), k_i(ki), k_j(kj) {
        if (di == dj) throw std::invalid_argument("BiIndex: directions must be distinct");
        if (di < 0 || dj < 0) throw std::invalid_argument("BiIndex: negative direction");
        if (ki < 0 || kj < 0) throw std::invalid_argument("BiIndex: negative component");
    }

    int order() const { return k_i + k_j; }

    /// Lift to a full d-variable multi-index.
    MultiIndex as_multi(int dim) const {
        std::vector<int> e(dim, 0);
        e.at(dir_i) = k_i;
        e.at(dir_j) = k_j;
        return MultiIndex(std::move(e));
    }

    std::string str() const {
        return "[" + std::to_string(k_i) + "," + std::to_string(k_j) + "]";
    }
};

} // namespace carleman

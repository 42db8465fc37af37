#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "qpoly.hpp"

namespace qstable {

/// Element of N^I: one nonnegative entry per quiver vertex.
class DimVector {
public:
    DimVector() = default;
    explicit DimVector(std::size_t n) : v_(n, 0) {}
    DimVector(std::initializer_list<long> xs) : v_(xs) { check(); }
    explicit DimVector(std::vector<long> xs) : v_(std::move(xs)) { check(); }

    static DimVector unit(std::size_t n, std::size_t i) {
        DimVector d(n);
        d.v_.at(i) = 1;
        return d;
    }

    std::size_t size() const { return v_.size(); }
    long operator[](std::size_t i) const { return v_[i]; }
    const std::vector<long>& entries() const { return v_; }

    long height() const { return std::accumulate(v_.begin(), v_.end(), 0L); }
    bool is_zero() const {
        return std::all_of(v_.begin(), v_.end(), [](long x) { return x == 0; });
    }

    /// Componentwise order.
    bool leq(const DimVector& o) const {
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (v_[i] > o.v_[i]) return false;
        return true;
    }

    DimVector scaled(long k) const {
        DimVector r = *this;
        for (auto& x : r.v_) x *= k;
        return r;
    }

    /// The vector divided by k, if every entry is divisible.
    std::optional<DimVector> divided(long k) const {
        DimVector r = *this;
        for (auto& x : r.v_) {
            if (x % k != 0) return std::nullopt;
            x /= k;
        }
        return r;
    }

    friend DimVector operator+(const DimVector& a, const DimVector& b) {
        same_size(a, b);
        DimVector r = a;
        for (std::size_t i = 0; i < r.v_.size(); ++i) r.v_[i] += b.v_[i];
        return r;
    }
    /// Requires b <= a componentwise.
    friend DimVector operator-(const DimVector& a, const DimVector& b) {
        same_size(a, b);
        DimVector r = a;
        for (std::size_t i = 0; i < r.v_.size(); ++i) {
            r.v_[i] -= b.v_[i];
            if (r.v_[i] < 0) throw PreconditionError("DimVector subtraction went negative");
        }
        return r;
    }

    friend auto operator<=>(const DimVector&, const DimVector&) = default;
    friend bool operator==(const DimVector&, const DimVector&) = default;

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < v_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v_[i]);
        }
        return s + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, const DimVector& d) { return os << d.to_string(); }

private:
    void check() const {
        for (long x : v_)
            if (x < 0) throw PreconditionError("DimVector entries must be nonnegative");
    }
    static void same_size(const DimVector& a, const DimVector& b) {
        if (a.size() != b.size()) throw PreconditionError("DimVector length mismatch");
    }

    std::vector<long> v_;
};

/// Square integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(std::size_t n) : n_(n), a_(n * n, 0) {}
    IntMatrix(std::size_t n, std::vector<long> entries) : n_(n), a_(std::move(entries)) {
        if (a_.size() != n * n) throw PreconditionError("IntMatrix: wrong number of entries");
    }

    std::size_t size() const { return n_; }
    long operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    long& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<long> a_;
};

/// alpha^t M beta
inline long bilinear(const IntMatrix& m, const DimVector& a, const DimVector& b) {
    if (a.size() != m.size() || b.size() != m.size())
        throw PreconditionError("bilinear form: dimension mismatch");
    long s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < m.size(); ++j) s += a[i] * m(i, j) * b[j];
    }
    return s;
}

/// The set {alpha : theta(alpha) = mu * height(alpha)} together with 0.
/// Closed under addition and under differences that stay in N^I.
struct SlopeCone {
    std::vector<long> theta;
    BigRational mu;

    bool contains(const DimVector& a) const {
        if (a.is_zero()) return true;
        long t = 0;
        for (std::size_t i = 0; i < a.size(); ++i) t += theta.at(i) * a[i];
        return BigRational(t) == mu * a.height();
    }

    friend bool operator==(const SlopeCone& a, const SlopeCone& b) {
        return a.theta == b.theta && a.mu == b.mu;
    }
};

/// Series are kept modulo terms of height > max_height, and optionally
/// restricted to a slope cone.
struct TruncationSpec {
    std::size_t num_vars = 1;
    long max_height = 1;
    std::optional<SlopeCone> cone;

    TruncationSpec() = default;
    TruncationSpec(std::size_t vars, long height, std::optional<SlopeCone> c = std::nullopt)
        : num_vars(vars), max_height(height), cone(std::move(c)) {
        if (max_height < 1) throw PreconditionError("max_height must be >= 1");
        if (cone && cone->theta.size() != num_vars) throw PreconditionError("cone theta length mismatch");
    }

    bool accepts(const DimVector& a) const {
        if (a.size() != num_vars || a.height() > max_height) return false;
        return !cone || cone->contains(a);
    }

    friend bool operator==(const TruncationSpec& a, const TruncationSpec& b) {
        return a.num_vars == b.num_vars && a.max_height == b.max_height && a.cone == b.cone;
    }
};

/// All vectors of exactly the given height in N^n, lexicographic order.
inline std::vector<DimVector> vectors_of_height(std::size_t n, long h) {
    std::vector<DimVector> out;
    if (n == 0) return out;
    std::vector<long> cur(n, 0);
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
        if (i + 1 == n) {
            cur[i] = left;
            out.emplace_back(cur);
            return;
        }
        for (long x = 0; x <= left; ++x) {
            cur[i] = x;
            self(self, i + 1, left - x);
        }
    };
    rec(rec, 0, h);
    return out;
}

/// Every vector admitted by the truncation, ordered by height then lexicographically.
inline std::vector<DimVector> support(const TruncationSpec& t) {
    std::vector<DimVector> out;
    for (long h = 0; h <= t.max_height; ++h)
        for (auto& v : vectors_of_height(t.num_vars, h))
            if (t.accepts(v)) out.push_back(std::move(v));
    return out;
}

/// All beta with 0 <= beta <= alpha componentwise, lexicographic order.
inline std::vector<DimVector> sub_vectors(const DimVector& alpha) {
    std::vector<DimVector> out;
    std::vector<long> cur(alpha.size(), 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == alpha.size()) {
            out.emplace_back(cur);
            return;
        }
        for (long x = 0; x <= alpha[i]; ++x) {
            cur[i] = x;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace qstable

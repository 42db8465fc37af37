#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dim_vector.hpp"
#include "errors.hpp"
#include "series.hpp"

namespace qstable {

/// Finite quiver given by its arrow-multiplicity matrix: entry (i, j) is the
/// number of arrows i -> j. Loops and parallel arrows are allowed.
class Quiver {
public:
    Quiver() = default;
    Quiver(std::vector<std::string> vertices, IntMatrix arrows)
        : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
        if (vertices_.empty()) throw PreconditionError("quiver needs at least one vertex");
        if (arrows_.size() != vertices_.size()) throw PreconditionError("arrow matrix must be |I| x |I|");
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j)
                if (arrows_(i, j) < 0) throw PreconditionError("arrow counts must be nonnegative");
    }

    /// One vertex with m loops.
    static Quiver loops(long m) { return Quiver({"1"}, IntMatrix(1, {m})); }
    /// Linearly oriented A_n: 1 -> 2 -> ... -> n.
    static Quiver linear(std::size_t n) {
        IntMatrix a(n);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) {
            names.push_back(std::to_string(i + 1));
            if (i + 1 < n) a(i, i + 1) = 1;
        }
        return Quiver(std::move(names), std::move(a));
    }
    /// Two vertices with m parallel arrows 1 -> 2 (m = 2: Kronecker quiver).
    static Quiver kronecker(long m = 2) { return Quiver({"1", "2"}, IntMatrix(2, {0, m, 0, 0})); }

    std::size_t size() const { return vertices_.size(); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const IntMatrix& arrows() const { return arrows_; }
    long arrow_count(std::size_t i, std::size_t j) const { return arrows_(i, j); }

    long total_arrows() const {
        long s = 0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) s += arrows_(i, j);
        return s;
    }

    /// Arrow list (source, target) in row-major order of the matrix.
    std::vector<std::pair<std::size_t, std::size_t>> arrow_list() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j)
                for (long k = 0; k < arrows_(i, j); ++k) out.emplace_back(i, j);
        return out;
    }

    bool has_oriented_cycle() const { return !topological_order().has_value(); }

    /// A vertex order in which every arrow goes forward, if one exists.
    std::optional<std::vector<std::size_t>> topological_order() const {
        const std::size_t n = size();
        std::vector<long> indeg(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) indeg[j] += arrows_(i, j);
        std::vector<std::size_t> order;
        std::vector<bool> done(n, false);
        while (order.size() < n) {
            bool progressed = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (done[v] || indeg[v] != 0) continue;
                done[v] = true;
                order.push_back(v);
                for (std::size_t j = 0; j < n; ++j) indeg[j] -= arrows_(v, j);
                progressed = true;
                break;
            }
            if (!progressed) return std::nullopt;
        }
        return order;
    }

    /// The same quiver with vertex order[k] moved to position k.
    Quiver reordered(const std::vector<std::size_t>& order) const {
        if (order.size() != size()) throw PreconditionError("reordered: permutation length mismatch");
        IntMatrix a(size());
        std::vector<std::string> names;
        for (std::size_t i = 0; i < size(); ++i) {
            names.push_back(vertices_.at(order[i]));
            for (std::size_t j = 0; j < size(); ++j) a(i, j) = arrows_(order[i], order.at(j));
        }
        return Quiver(std::move(names), std::move(a));
    }

private:
    std::vector<std::string> vertices_;
    IntMatrix arrows_;
};

struct Stability {
    std::vector<long> theta;

    static Stability zero(std::size_t n) { return {std::vector<long>(n, 0)}; }
    bool is_trivial() const {
        for (long t : theta)
            if (t != theta.front()) return false;
        return true;
    }
    long operator()(const DimVector& a) const {
        if (a.size() != theta.size()) throw PreconditionError("stability length mismatch");
        long s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += theta[i] * a[i];
        return s;
    }
};

/// R_ij = delta_ij - #arrows(i -> j)
inline IntMatrix ringel_matrix(const Quiver& q) {
    IntMatrix r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r(i, j) = (i == j ? 1 : 0) - q.arrow_count(i, j);
    return r;
}

/// <a,b> = sum_i a^i b^i - sum_{arrows i->j} a^i b^j, evaluated from the arrow data.
inline long ringel_form(const Quiver& q, const DimVector& a, const DimVector& b) {
    if (a.size() != q.size() || b.size() != q.size()) throw PreconditionError("ringel_form: length mismatch");
    long s = 0;
    for (std::size_t i = 0; i < q.size(); ++i) s += a[i] * b[i];
    for (const auto& [i, j] : q.arrow_list()) s -= a[i] * b[j];
    return s;
}

inline long tits_form(const Quiver& q, const DimVector& a) { return ringel_form(q, a, a); }

/// sum_i a^i a^i
inline long dot_self(const DimVector& a) {
    long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i];
    return s;
}

/// mu(a) = theta(a) / height(a)
inline BigRational slope(const Stability& theta, const DimVector& a) {
    if (a.is_zero()) throw PreconditionError("slope of the zero vector is undefined");
    return make_rational(theta(a), a.height());
}

/// Upper argument of a q-binomial: an integer or infinity.
struct BinomialTop {
    long n = 0;
    bool infinite = false;

    static BinomialTop infinity() { return {0, true}; }
    static BinomialTop finite(long n) { return {n, false}; }
};

namespace detail {
inline QPoly one_minus_q_power(long k) {  // 1 - q^k, k >= 0
    return QPoly(1) - QPoly::monomial(static_cast<std::size_t>(k));
}
}  // namespace detail

/// [n,m] = prod_{i=1}^m (1 - q^{n+i}) / (1 - q^i); [inf,m] = 1 / prod (1 - q^i).
inline RationalFunction qbinom(BinomialTop top, long m) {
    if (m < 0) throw PreconditionError("qbinom: m must be >= 0");
    QPoly den(1);
    for (long i = 1; i <= m; ++i) den *= detail::one_minus_q_power(i);
    if (top.infinite) return RationalFunction(QPoly(1), den);
    // 1 - q^k for k < 0 equals -q^k (1 - q^{-k}) = (q^{-k} - 1) / q^{-k}.
    QPoly num(1);
    long neg_shift = 0;
    for (long i = 1; i <= m; ++i) {
        const long k = top.n + i;
        if (k == 0) return RationalFunction();
        if (k > 0) {
            num *= detail::one_minus_q_power(k);
        } else {
            num *= -detail::one_minus_q_power(-k);
            neg_shift += -k;
        }
    }
    return RationalFunction(num, den * QPoly::monomial(static_cast<std::size_t>(neg_shift)));
}

inline RationalFunction qbinom(long n, long m) { return qbinom(BinomialTop::finite(n), m); }

/// [lambda, a] = prod_i [lambda^i, a^i]
inline RationalFunction qbinom_vec(const std::vector<long>& lambda, const DimVector& a) {
    if (lambda.size() != a.size()) throw PreconditionError("qbinom_vec: length mismatch");
    RationalFunction r(1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        r *= qbinom(lambda[i], a[i]);
        if (r.is_zero()) break;
    }
    return r;
}

/// [inf, a] = prod_i [inf, a^i]
inline RationalFunction qbinom_inf_vec(const DimVector& a) {
    RationalFunction r(1);
    for (std::size_t i = 0; i < a.size(); ++i) r *= qbinom(BinomialTop::infinity(), a[i]);
    return r;
}

/// p = sum_a [inf, a] x^a
inline QSeries p_series(const TruncationSpec& t) {
    QSeries s(t);
    for (const auto& a : support(t)) s.set(a, qbinom_inf_vec(a));
    return s;
}
inline QSeries p_series(const Quiver& q, const TruncationSpec& t) {
    if (t.num_vars != q.size()) throw PreconditionError("p_series: truncation does not match quiver");
    return p_series(t);
}

/// p(lambda) = sum_a [lambda, a] x^a
inline QSeries p_lambda_series(const std::vector<long>& lambda, const TruncationSpec& t) {
    if (lambda.size() != t.num_vars) throw PreconditionError("p_lambda: length mismatch");
    QSeries s(t);
    for (const auto& a : support(t)) s.set(a, qbinom_vec(lambda, a));
    return s;
}

/// Coefficient of x^k in (1 - x)^{-(lambda+1)}: C(lambda + k, k) for any integer lambda.
inline BigRational generalized_binomial(long lambda, long k) {
    BigRational r = 1;
    for (long i = 1; i <= k; ++i) r *= make_rational(lambda + i, i);
    return r;
}

/// p(lambda) at q = 1, from prod_i (1 - x_i)^{-lambda^i - 1}.
inline RatSeries p_lambda_at_one(const std::vector<long>& lambda, const TruncationSpec& t) {
    if (lambda.size() != t.num_vars) throw PreconditionError("p_lambda_at_one: length mismatch");
    RatSeries s(t);
    for (const auto& a : support(t)) {
        BigRational c = 1;
        for (std::size_t i = 0; i < a.size(); ++i) c *= generalized_binomial(lambda[i], a[i]);
        s.set(a, c);
    }
    return s;
}

/// -R a
inline std::vector<long> minus_ringel_times(const IntMatrix& r, const DimVector& a) {
    std::vector<long> out(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) out[i] -= r(i, j) * a[j];
    return out;
}

}  // namespace qstable

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dim_vector.hpp"
#include "errors.hpp"
#include "number_theory.hpp"
#include "quiver.hpp"
#include "rational_function.hpp"
#include "series.hpp"

namespace qstable {

/// Everything a counting run is parameterised by: the quiver, the stability,
/// the target slope and the truncation, whose cone keeps exactly the
/// vectors of slope mu (and 0).
struct CountingContext {
    Quiver quiver;
    Stability theta;
    BigRational mu;
    TruncationSpec trunc;
    IntMatrix ringel;

    static CountingContext make(Quiver q, Stability theta, BigRational mu, long max_height) {
        if (theta.theta.size() != q.size()) throw PreconditionError("theta length does not match the quiver");
        TruncationSpec t(q.size(), max_height, SlopeCone{theta.theta, mu});
        bool attained = false;
        for (const auto& a : support(t))
            if (!a.is_zero()) attained = true;
        if (!attained)
            throw PreconditionError("slope " + mu.get_str() + " is not attained below height " +
                                    std::to_string(max_height));
        IntMatrix r = ringel_matrix(q);
        return CountingContext{std::move(q), std::move(theta), std::move(mu), std::move(t), std::move(r)};
    }

    /// theta = 0, slope 0: the irreducible-representation setting.
    static CountingContext trivial(Quiver q, long max_height) {
        const std::size_t n = q.size();
        return make(std::move(q), Stability::zero(n), 0, max_height);
    }

    bool in_cone(const DimVector& a) const { return trunc.accepts(a); }
};

template <class V>
struct CountTable {
    std::string provenance;
    std::map<DimVector, V> entries;

    const V& at(const DimVector& a) const {
        auto it = entries.find(a);
        if (it == entries.end()) throw PreconditionError("count table has no entry for " + a.to_string());
        return it->second;
    }
    bool contains(const DimVector& a) const { return entries.count(a) != 0; }
};

/// #GL_n(F_q) = prod_{i=0}^{n-1} (q^n - q^i)
inline QPoly gl_order(long n) {
    QPoly r(1);
    for (long i = 0; i < n; ++i)
        r *= QPoly::monomial(static_cast<std::size_t>(n)) - QPoly::monomial(static_cast<std::size_t>(i));
    return r;
}

/// t_a = #R_a / #GL_a = q^{a.a - T(a)} / prod_i #GL_{a^i}(q)
inline RationalFunction t_alpha(const Quiver& q, const DimVector& a) {
    QPoly den(1);
    for (std::size_t i = 0; i < a.size(); ++i) den *= gl_order(a[i]);
    return RationalFunction(QPoly::monomial(static_cast<std::size_t>(dot_self(a) - tits_form(q, a))), den);
}
inline RationalFunction t_alpha(const CountingContext& ctx, const DimVector& a) { return t_alpha(ctx.quiver, a); }

namespace detail {

inline bool slope_above(const Stability& theta, const DimVector& g, const BigRational& mu) {
    return slope(theta, g) > mu;
}

/// Shared state of the resolution: t_beta values and the prefix weights W.
/// W(0) = -1, and for prefix sums g of slope > mu
///   W(g) = -sum_{0<b<=g} W(g-b) q^{-<b, g-b>} t_b,
/// where g - b ranges over admissible prefixes (0 or slope > mu).
class Resolution {
public:
    explicit Resolution(const CountingContext& ctx) : ctx_(ctx) {
        const DimVector zero(ctx.quiver.size());
        prefix_[zero] = RationalFunction(-1);
        TruncationSpec all(ctx.quiver.size(), ctx.trunc.max_height);
        for (const auto& g : support(all))
            if (!g.is_zero() && slope_above(ctx.theta, g, ctx.mu)) prefix_[g] = step(g);
    }

    RationalFunction r(const DimVector& a) { return step(a); }

    const RationalFunction& t(const DimVector& b) {
        auto it = t_.find(b);
        if (it == t_.end()) it = t_.emplace(b, t_alpha(ctx_.quiver, b)).first;
        return it->second;
    }

private:
    RationalFunction step(const DimVector& g) {
        RationalFunction acc;
        for (const auto& b : sub_vectors(g)) {
            if (b.is_zero()) continue;
            const DimVector rest = g - b;
            auto it = prefix_.find(rest);
            if (it == prefix_.end()) continue;
            acc += it->second * RationalFunction::q_power(-ringel_form(ctx_.quiver, b, rest)) * t(b);
        }
        return -acc;
    }

    const CountingContext& ctx_;
    std::map<DimVector, RationalFunction> prefix_;
    std::map<DimVector, RationalFunction> t_;
};

inline void require_cone(const CountingContext& ctx, const DimVector& a) {
    if (a.size() != ctx.quiver.size()) throw PreconditionError("dimension vector length mismatch");
    if (a.is_zero()) return;
    if (slope(ctx.theta, a) != ctx.mu)
        throw PreconditionError("slope mismatch: " + a.to_string() + " has slope " +
                                slope(ctx.theta, a).get_str() + ", context slope is " + ctx.mu.get_str());
}

}  // namespace detail

/// r_a = #R^ss_a / #GL_a via the resolution over ordered decompositions
/// a = a_1 + ... + a_k whose proper prefix sums have slope > mu(a):
///   r_a = sum (-1)^{k-1} q^{-sum_{i<j} <a_j, a_i>} prod t_{a_i}.
/// Evaluated by dynamic programming over prefix sums.
inline RationalFunction r_alpha(const CountingContext& ctx, const DimVector& a) {
    detail::require_cone(ctx, a);
    if (a.is_zero()) return RationalFunction(1);
    detail::Resolution res(ctx);
    return res.r(a);
}

/// Same quantity by literal enumeration of every admissible tuple. Exponential;
/// used to cross-check the dynamic programme on small vectors.
inline RationalFunction r_alpha_by_enumeration(const CountingContext& ctx, const DimVector& a) {
    detail::require_cone(ctx, a);
    if (a.is_zero()) return RationalFunction(1);
    RationalFunction total;
    std::vector<DimVector> parts;
    auto rec = [&](auto&& self, const DimVector& remaining) -> void {
        for (const auto& b : sub_vectors(remaining)) {
            if (b.is_zero()) continue;
            parts.push_back(b);
            const DimVector rest = remaining - b;
            if (rest.is_zero()) {
                long twist = 0;
                for (std::size_t i = 0; i < parts.size(); ++i)
                    for (std::size_t j = i + 1; j < parts.size(); ++j)
                        twist += ringel_form(ctx.quiver, parts[j], parts[i]);
                RationalFunction term = RationalFunction::q_power(-twist);
                for (const auto& p : parts) term *= t_alpha(ctx.quiver, p);
                total += (parts.size() % 2 == 1) ? term : -term;
            } else {
                DimVector prefix(a.size());
                for (const auto& p : parts) prefix = prefix + p;
                if (detail::slope_above(ctx.theta, prefix, ctx.mu)) self(self, rest);
            }
            parts.pop_back();
        }
    };
    rec(rec, a);
    return total;
}

/// r(q) = sum_a r_a x^a over the slope cone.
inline QSeries r_series(const CountingContext& ctx) {
    detail::Resolution res(ctx);
    QSeries s(ctx.trunc);
    for (const auto& a : support(ctx.trunc)) s.set(a, a.is_zero() ? RationalFunction(1) : res.r(a));
    return s;
}

/// Table of r_a for every nonzero a in the cone.
inline CountTable<RationalFunction> r_table(const CountingContext& ctx) {
    CountTable<RationalFunction> t{"r_alpha: resolution over slope-ordered decompositions", {}};
    detail::Resolution res(ctx);
    for (const auto& a : support(ctx.trunc))
        if (!a.is_zero()) t.entries[a] = res.r(a);
    return t;
}

/// The series a(q) = sum a_a x^a from a table (zero constant term).
inline QSeries to_series(const CountTable<QPoly>& table, const TruncationSpec& t) {
    QSeries s(t);
    for (const auto& [a, p] : table.entries)
        if (t.accepts(a)) s.set(a, RationalFunction(p));
    return s;
}

/// a(q) from r(q) o Exp(a/(1-q)) = 1: a = (1-q) Log(r^{o -1}).
/// Every coefficient must come out as an integer polynomial.
inline CountTable<QPoly> a_series(const CountingContext& ctx) {
    const QSeries r = r_series(ctx);
    const QSeries g = twisted_inverse(r, ctx.ringel);
    const QSeries l = log_series(g);
    const RationalFunction one_minus_q(QPoly::from_ints({1, -1}));
    CountTable<QPoly> out{"a_alpha: (1-q) Log of the twisted inverse of r", {}};
    for (const auto& a : support(ctx.trunc)) {
        if (a.is_zero()) continue;
        const RationalFunction c = l.coeff(a) * one_minus_q;
        if (!c.is_polynomial() || !c.num().is_integral())
            throw InvariantViolation("a_" + a.to_string() + " is not an integer polynomial: " + c.to_string());
        out.entries[a] = c.num();
    }
    return out;
}

/// s_{r a, r} = (1/r) sum_{k | r} mobius(r/k) psi_k(a_a): stable classes of
/// dimension r a whose endomorphism field has degree r over F_q.
inline QPoly s_alpha_r(const CountTable<QPoly>& table, const DimVector& alpha, long r) {
    if (r < 1) throw PreconditionError("s_alpha_r: r must be >= 1");
    const QPoly& a = table.at(alpha);
    QPoly s;
    for (long k : divisors(r)) {
        const int m = moebius(r / k);
        if (m != 0) s += a.substitute_power(static_cast<std::size_t>(k)) * BigRational(m);
    }
    s *= make_rational(1, r);
    for (long q : {2L, 3L}) {
        const BigRational v = s.evaluate(q);
        if (v.get_den() != 1 || sgn(v) < 0)
            throw InvariantViolation("s_{" + alpha.scaled(r).to_string() + "," + std::to_string(r) +
                                     "} is not a cardinality at q=" + std::to_string(q) + ": " + v.get_str());
    }
    return s;
}

/// s_{beta, r} for a vector beta divisible by r.
inline QPoly s_for_vector(const CountTable<QPoly>& table, const DimVector& beta, long r) {
    if (r < 1) throw PreconditionError("s_for_vector: r must be >= 1");
    const auto base = beta.divided(r);
    if (!base) throw PreconditionError(beta.to_string() + " is not divisible by " + std::to_string(r));
    return s_alpha_r(table, *base, r);
}

namespace detail {
inline void require_trivial_stability(const CountingContext& ctx) {
    for (long t : ctx.theta.theta)
        if (t != 0) throw PreconditionError("this computation requires theta = 0");
}
inline void require_no_pole_at_one(const QSeries& f, const char* what) {
    for (const auto& [a, c] : f.terms())
        if (sgn(c.den().evaluate(1)) == 0)
            throw InvariantViolation(std::string(what) + ": coefficient of x^" + a.to_string() + " has a pole at q=1");
}
}  // namespace detail

/// f = Exp((a(q) - sum x_i) / (1 - q)), computed directly from a table of a_a.
inline QSeries f_series(const CountingContext& ctx, const CountTable<QPoly>& table) {
    detail::require_trivial_stability(ctx);
    const QSeries a = to_series(table, ctx.trunc);
    const RationalFunction inv(QPoly(1), QPoly::from_ints({1, -1}));
    const QSeries f = exp_series((a - QSeries::sum_of_variables(ctx.trunc)) * inv);
    detail::require_no_pole_at_one(f, "f_series");
    return f;
}

/// f from the recursion (p(-R a) f)_a = 0 for a > 0, without knowing a(q):
/// f_a = -sum_{0<b<=a} [-R a, b] f_{a-b}.
inline QSeries f_recursive(const CountingContext& ctx) {
    detail::require_trivial_stability(ctx);
    QSeries f = QSeries::one(ctx.trunc);
    for (const auto& a : support(ctx.trunc)) {
        if (a.is_zero()) continue;
        const std::vector<long> lambda = minus_ringel_times(ctx.ringel, a);
        RationalFunction acc;
        for (const auto& b : sub_vectors(a)) {
            if (b.is_zero()) continue;
            const RationalFunction rest = f.coeff(a - b);
            if (rest.is_zero()) continue;
            acc += qbinom_vec(lambda, b) * rest;
        }
        f.set(a, -acc);
    }
    return f;
}

/// The same recursion run at q = 1 with p(lambda)|_{q=1} = prod (1-x_i)^{-lambda^i-1}.
inline RatSeries f_at_one(const CountingContext& ctx) {
    detail::require_trivial_stability(ctx);
    RatSeries f = RatSeries::one(ctx.trunc);
    for (const auto& a : support(ctx.trunc)) {
        if (a.is_zero()) continue;
        const std::vector<long> lambda = minus_ringel_times(ctx.ringel, a);
        BigRational acc = 0;
        for (const auto& b : sub_vectors(a)) {
            if (b.is_zero()) continue;
            const BigRational rest = f.coeff(a - b);
            if (sgn(rest) == 0) continue;
            BigRational c = 1;
            for (std::size_t i = 0; i < b.size(); ++i) c *= generalized_binomial(lambda[i], b[i]);
            acc += c * rest;
        }
        f.set(a, -acc);
    }
    return f;
}

/// f_0..f_order with f = sum_n f_n (q-1)^n, each f_n a series with rational coefficients.
inline std::vector<RatSeries> q1_expansion(const CountingContext& ctx, const CountTable<QPoly>& table,
                                           std::size_t order) {
    const QSeries f = f_series(ctx, table);
    std::vector<RatSeries> out(order + 1, RatSeries(ctx.trunc));
    for (const auto& [a, c] : f.terms()) {
        const auto coeffs = c.taylor_at_one(order);
        for (std::size_t n = 0; n <= order; ++n) out[n].set(a, coeffs[n]);
    }
    return out;
}

inline std::vector<RatSeries> q1_expansion(const CountingContext& ctx, std::size_t order) {
    return q1_expansion(ctx, a_series(ctx), order);
}

}  // namespace qstable

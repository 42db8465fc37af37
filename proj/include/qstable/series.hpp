#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dim_vector.hpp"
#include "errors.hpp"
#include "number_theory.hpp"
#include "rational_function.hpp"

namespace qstable {

/// How the Adams operations and conjugation act on a coefficient ring.
template <class C>
struct CoefficientTraits;

template <>
struct CoefficientTraits<RationalFunction> {
    static RationalFunction adams(const RationalFunction& c, std::size_t k) { return c.adams(k); }
    static bool is_zero(const RationalFunction& c) { return c.is_zero(); }
    static std::string to_string(const RationalFunction& c) { return c.to_string(); }
};

/// Plain rationals, e.g. the q = 1 specialisation: psi_k acts trivially.
template <>
struct CoefficientTraits<BigRational> {
    static BigRational adams(const BigRational& c, std::size_t) { return c; }
    static bool is_zero(const BigRational& c) { return sgn(c) == 0; }
    static std::string to_string(const BigRational& c) { return c.get_str(); }
};

template <class C>
concept SeriesCoefficient = requires(const C& a, const C& b, const BigRational& r, std::size_t k) {
    { a + b } -> std::convertible_to<C>;
    { a - b } -> std::convertible_to<C>;
    { a * b } -> std::convertible_to<C>;
    { a * r } -> std::convertible_to<C>;
    { a / b } -> std::convertible_to<C>;
    { CoefficientTraits<C>::adams(a, k) } -> std::convertible_to<C>;
    { CoefficientTraits<C>::is_zero(a) } -> std::convertible_to<bool>;
};

/// Truncated power series in x_1..x_n with coefficients in C. Stores only
/// nonzero coefficients; every key is admitted by the truncation spec.
template <SeriesCoefficient C>
class Series {
public:
    using coefficient_type = C;
    using traits = CoefficientTraits<C>;

    explicit Series(TruncationSpec t) : trunc_(std::move(t)) {}

    static Series constant(const TruncationSpec& t, const C& c) {
        Series s(t);
        s.set(DimVector(t.num_vars), c);
        return s;
    }
    static Series one(const TruncationSpec& t) { return constant(t, C(1)); }
    static Series monomial(const TruncationSpec& t, const DimVector& a, const C& c) {
        Series s(t);
        s.set(a, c);
        return s;
    }
    /// x_1 + ... + x_n (restricted to the truncation).
    static Series sum_of_variables(const TruncationSpec& t) {
        Series s(t);
        for (std::size_t i = 0; i < t.num_vars; ++i) s.set(DimVector::unit(t.num_vars, i), C(1));
        return s;
    }

    const TruncationSpec& truncation() const { return trunc_; }
    const std::map<DimVector, C>& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    C coeff(const DimVector& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? C(0) : it->second;
    }
    C constant_term() const { return coeff(DimVector(trunc_.num_vars)); }

    /// Terms above the height bound are dropped; keys outside the cone are an error.
    void set(const DimVector& a, C c) {
        if (a.size() != trunc_.num_vars) throw PreconditionError("series key has wrong length");
        if (a.height() > trunc_.max_height) return;
        if (trunc_.cone && !trunc_.cone->contains(a))
            throw PreconditionError("series key " + a.to_string() + " outside the slope cone");
        if (traits::is_zero(c))
            terms_.erase(a);
        else
            terms_[a] = std::move(c);
    }
    void add_to(const DimVector& a, const C& c) {
        if (traits::is_zero(c) || a.height() > trunc_.max_height) return;
        auto it = terms_.find(a);
        if (it == terms_.end()) {
            set(a, c);
            return;
        }
        it->second = it->second + c;
        if (traits::is_zero(it->second)) terms_.erase(it);
    }

    template <class F>
    Series map_coefficients(F&& f) const {
        Series r(trunc_);
        for (const auto& [a, c] : terms_) r.set(a, f(a, c));
        return r;
    }

    Series operator-() const {
        return map_coefficients([](const DimVector&, const C& c) { return c * BigRational(-1); });
    }
    friend Series operator+(const Series& a, const Series& b) {
        check_compatible(a, b);
        Series r = a;
        for (const auto& [k, c] : b.terms_) r.add_to(k, c);
        return r;
    }
    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }
    friend Series operator*(const Series& a, const C& c) {
        return a.map_coefficients([&](const DimVector&, const C& x) { return x * c; });
    }

    /// Ordinary (commutative) Cauchy product.
    friend Series operator*(const Series& a, const Series& b) {
        check_compatible(a, b);
        return bilinear_product(a, b, [](const DimVector&, const DimVector&) -> const C* { return nullptr; });
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

    static void check_compatible(const Series& a, const Series& b) {
        if (!(a.trunc_ == b.trunc_)) throw TruncationMismatch();
    }

    /// Product weighted per monomial pair; weight(alpha, beta) returns a
    /// pointer to a coefficient factor or nullptr for weight 1.
    template <class Weight>
    static Series bilinear_product(const Series& a, const Series& b, Weight&& weight) {
        Series r(a.trunc_);
        const long maxh = a.trunc_.max_height;
        std::vector<std::pair<long, const std::pair<const DimVector, C>*>> bt;
        bt.reserve(b.terms_.size());
        for (const auto& t : b.terms_) bt.emplace_back(t.first.height(), &t);
        for (const auto& [ka, ca] : a.terms_) {
            const long ha = ka.height();
            for (const auto& [hb, tb] : bt) {
                if (ha + hb > maxh) continue;
                C prod = ca * tb->second;
                if (const C* w = weight(ka, tb->first)) prod = prod * *w;
                r.add_to(ka + tb->first, prod);
            }
        }
        return r;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [a, c] : terms_) {
            if (!first) s += " + ";
            first = false;
            s += "[" + traits::to_string(c) + "]";
            if (!a.is_zero()) s += "*x^" + a.to_string();
        }
        return s;
    }
    friend std::ostream& operator<<(std::ostream& os, const Series& s) { return os << s.to_string(); }

private:
    TruncationSpec trunc_;
    std::map<DimVector, C> terms_;
};

using QSeries = Series<RationalFunction>;
using RatSeries = Series<BigRational>;

/// psi_k: q -> q^k on coefficients, x^alpha -> x^(k alpha).
template <class C>
Series<C> adams(const Series<C>& a, std::size_t k) {
    if (k == 0) throw PreconditionError("adams: k must be >= 1");
    if (k == 1) return a;
    Series<C> r(a.truncation());
    for (const auto& [v, c] : a.terms()) {
        const DimVector kv = v.scaled(static_cast<long>(k));
        if (kv.height() > a.truncation().max_height) continue;
        r.set(kv, CoefficientTraits<C>::adams(c, k));
    }
    return r;
}

/// Ordinary exponential of a series without constant term.
template <class C>
Series<C> plain_exp(const Series<C>& h) {
    if (!CoefficientTraits<C>::is_zero(h.constant_term()))
        throw PreconditionError("exp: argument must have zero constant term");
    const auto& t = h.truncation();
    Series<C> e = Series<C>::one(t);
    // Euler operator: |alpha| E_alpha = sum_{0<beta<=alpha} |beta| h_beta E_{alpha-beta}
    for (const auto& alpha : support(t)) {
        if (alpha.is_zero()) continue;
        C acc(0);
        for (const auto& [beta, hb] : h.terms()) {
            if (!beta.leq(alpha)) continue;
            const auto& et = e.terms();
            auto it = et.find(alpha - beta);
            if (it == et.end()) continue;
            acc = acc + hb * it->second * BigRational(beta.height());
        }
        e.set(alpha, acc * make_rational(1, alpha.height()));
    }
    return e;
}

/// Ordinary logarithm of a series with constant term 1.
template <class C>
Series<C> plain_log(const Series<C>& f) {
    if (f.constant_term() != C(1)) throw PreconditionError("log: constant term must be 1");
    const auto& t = f.truncation();
    Series<C> l(t);
    // |alpha| L_alpha = |alpha| f_alpha - sum_{0<beta<alpha} |beta| L_beta f_{alpha-beta}
    for (const auto& alpha : support(t)) {
        if (alpha.is_zero()) continue;
        C acc = f.coeff(alpha) * BigRational(alpha.height());
        for (const auto& [beta, lb] : l.terms()) {
            if (beta == alpha || !beta.leq(alpha)) continue;
            const auto& ft = f.terms();
            auto it = ft.find(alpha - beta);
            if (it == ft.end()) continue;
            acc = acc - lb * it->second * BigRational(beta.height());
        }
        l.set(alpha, acc * make_rational(1, alpha.height()));
    }
    return l;
}

/// f^g = exp(g log f), f with constant term 1.
template <class C>
Series<C> plain_pow(const Series<C>& f, const Series<C>& g) {
    return plain_exp(g * plain_log(f));
}

/// Plethystic exponential Exp(a) = exp(sum_k psi_k(a)/k). Only k <= max_height
/// contribute, since psi_k(a) has no terms below height k.
template <class C>
Series<C> exp_series(const Series<C>& a) {
    if (!CoefficientTraits<C>::is_zero(a.constant_term()))
        throw PreconditionError("Exp: argument must have zero constant term");
    Series<C> s(a.truncation());
    for (long k = 1; k <= a.truncation().max_height; ++k)
        s = s + adams(a, static_cast<std::size_t>(k)) * make_rational(1, k);
    return plain_exp(s);
}

/// Plethystic logarithm (Cadogan): Log(f) = sum_k mobius(k)/k psi_k(log f).
template <class C>
Series<C> log_series(const Series<C>& f) {
    if (f.constant_term() != C(1)) throw PreconditionError("Log: constant term must be 1");
    const Series<C> l = plain_log(f);
    Series<C> s(f.truncation());
    for (long k = 1; k <= f.truncation().max_height; ++k) {
        const int m = moebius(k);
        if (m == 0) continue;
        s = s + adams(l, static_cast<std::size_t>(k)) * make_rational(m, k);
    }
    return s;
}

/// Pow(f, g) = Exp(g Log f).
template <class C>
Series<C> pow_series(const Series<C>& f, const Series<C>& g) {
    return exp_series(g * log_series(f));
}

/// Twisted product x^a o x^b = q^{-<a,b>} x^{a+b}, <a,b> = a^t R b.
inline QSeries twisted_mul(const QSeries& a, const QSeries& b, const IntMatrix& ringel) {
    QSeries::check_compatible(a, b);
    if (ringel.size() != a.truncation().num_vars) throw PreconditionError("twisted_mul: form dimension mismatch");
    std::map<long, RationalFunction> cache;
    RationalFunction w;
    return QSeries::bilinear_product(a, b, [&](const DimVector& x, const DimVector& y) -> const RationalFunction* {
        const long e = bilinear(ringel, x, y);
        if (e == 0) return nullptr;
        auto it = cache.find(e);
        if (it == cache.end()) it = cache.emplace(e, RationalFunction::q_power(-e)).first;
        return &it->second;
    });
}

/// g with a o g = 1, solved degree by degree.
inline QSeries twisted_inverse(const QSeries& a, const IntMatrix& ringel) {
    const RationalFunction a0 = a.constant_term();
    if (a0.is_zero()) throw NotInvertible();
    if (ringel.size() != a.truncation().num_vars) throw PreconditionError("twisted_inverse: form dimension mismatch");
    const RationalFunction inv0 = a0.inverse();
    const auto& t = a.truncation();
    QSeries g = QSeries::constant(t, inv0);
    for (const auto& alpha : support(t)) {
        if (alpha.is_zero()) continue;
        RationalFunction acc;
        for (const auto& [beta, ab] : a.terms()) {
            if (beta.is_zero() || !beta.leq(alpha)) continue;
            const DimVector rest = alpha - beta;
            const auto& gt = g.terms();
            auto it = gt.find(rest);
            if (it == gt.end()) continue;
            acc += RationalFunction::q_power(-bilinear(ringel, beta, rest)) * ab * it->second;
        }
        g.set(alpha, -(inv0 * acc));
    }
    return g;
}

/// T(x^a) = q^{a^t R a} x^a
inline QSeries apply_T(const QSeries& a, const IntMatrix& ringel) {
    return a.map_coefficients([&](const DimVector& v, const RationalFunction& c) {
        return c * RationalFunction::q_power(bilinear(ringel, v, v));
    });
}

/// S_lambda(x^a) = q^{sum lambda^i a^i} x^a
inline QSeries apply_S(const QSeries& a, const std::vector<long>& lambda) {
    if (lambda.size() != a.truncation().num_vars) throw PreconditionError("S_lambda: length mismatch");
    return a.map_coefficients([&](const DimVector& v, const RationalFunction& c) {
        long e = 0;
        for (std::size_t i = 0; i < v.size(); ++i) e += lambda[i] * v[i];
        return c * RationalFunction::q_power(e);
    });
}

/// Coefficientwise q -> 1/q.
inline QSeries bar(const QSeries& a) {
    return a.map_coefficients([](const DimVector&, const RationalFunction& c) { return c.bar(); });
}

/// Coefficientwise Taylor coefficient of order n at q = 1.
inline RatSeries taylor_slice_at_one(const QSeries& a, std::size_t n) {
    RatSeries r(a.truncation());
    for (const auto& [v, c] : a.terms()) r.set(v, c.taylor_at_one(n)[n]);
    return r;
}

/// Coefficientwise evaluation at q = v.
inline RatSeries evaluate(const QSeries& a, const BigRational& v) {
    RatSeries r(a.truncation());
    for (const auto& [k, c] : a.terms()) r.set(k, c.evaluate(v));
    return r;
}

}  // namespace qstable

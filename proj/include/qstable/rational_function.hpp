#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "detail/poly_gcd.hpp"
#include "errors.hpp"
#include "qpoly.hpp"

namespace qstable {

/// Element of Q(q), kept in canonical form: coprime numerator and
/// denominator, monic denominator, and denominator 1 for zero. Canonical
/// form makes equality structural.
class RationalFunction {
public:
    RationalFunction() : den_(1) {}
    RationalFunction(const BigRational& c) : num_(c), den_(1) {}  // NOLINT
    RationalFunction(long c) : num_(c), den_(1) {}                  // NOLINT
    RationalFunction(QPoly p) : num_(std::move(p)), den_(1) {}      // NOLINT
    RationalFunction(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw DivisionByZero();
        normalize();
    }

    /// q^k for any integer k.
    static RationalFunction q_power(long k) {
        if (k >= 0) return RationalFunction(QPoly::monomial(static_cast<std::size_t>(k)));
        return from_canonical(QPoly(1), QPoly::monomial(static_cast<std::size_t>(-k)));
    }

    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_one() const { return is_polynomial() && num_ == QPoly(1); }

    RationalFunction operator-() const { return from_canonical(-num_, den_); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) {
            if (a.is_polynomial()) return RationalFunction(a.num_ + b.num_);
            return RationalFunction(a.num_ + b.num_, a.den_);
        }
        if (a.is_polynomial()) return from_canonical(a.num_ * b.den_ + b.num_, b.den_);
        if (b.is_polynomial()) return from_canonical(a.num_ + b.num_ * a.den_, a.den_);
        const QPoly g = gcd(a.den_, b.den_);
        if (g.is_constant())
            return from_canonical(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
        const QPoly ad = exact_div(a.den_, g);
        const QPoly bd = exact_div(b.den_, g);
        // Only factors of g can cancel.
        QPoly n = a.num_ * bd + b.num_ * ad;
        if (n.is_zero()) return {};
        const QPoly h = gcd(n, g);
        if (h.is_constant()) return from_canonical(std::move(n), a.den_ * bd);
        return from_canonical(exact_div(n, h), exact_div(a.den_, h) * bd);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.num_ * b.num_);
        // Cross-cancel: gcd(a.num, b.den) and gcd(b.num, a.den).
        QPoly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
        if (!bd.is_constant()) {
            const QPoly g = gcd(an, bd);
            if (!g.is_constant()) {
                an = exact_div(an, g);
                bd = exact_div(bd, g);
            }
        }
        if (!ad.is_constant()) {
            const QPoly g = gcd(bn, ad);
            if (!g.is_constant()) {
                bn = exact_div(bn, g);
                ad = exact_div(ad, g);
            }
        }
        return from_canonical(an * bn, ad * bd);
    }

    friend RationalFunction operator*(const RationalFunction& a, const BigRational& c) {
        if (sgn(c) == 0 || a.is_zero()) return {};
        return from_canonical(a.num_ * c, a.den_);
    }
    friend RationalFunction operator*(const BigRational& c, const RationalFunction& a) { return a * c; }

    RationalFunction inverse() const {
        if (is_zero()) throw DivisionByZero();
        return from_canonical(den_, num_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        return a * b.inverse();
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    /// Adams operation on the coefficient field: q -> q^k. Coprimality
    /// survives the substitution, so no gcd is needed.
    RationalFunction adams(std::size_t k) const {
        if (k == 0) throw PreconditionError("adams: k must be >= 1");
        if (k == 1) return *this;
        return from_canonical(num_.substitute_power(k), den_.substitute_power(k));
    }

    /// q -> 1/q
    RationalFunction bar() const {
        if (is_zero()) return *this;
        // n(1/q)/d(1/q) = q^(deg d - deg n) rev(n)/rev(d); rev(.) has no factor q.
        const QPoly rn = num_.unshifted(num_.valuation()).reversed();
        const QPoly rd = den_.unshifted(den_.valuation()).reversed();
        const long shift = den_.degree() - num_.degree();
        if (shift >= 0) return from_canonical(rn.shifted(static_cast<std::size_t>(shift)), rd);
        return from_canonical(rn, rd.shifted(static_cast<std::size_t>(-shift)));
    }

    BigRational evaluate(const BigRational& v) const {
        const BigRational d = den_.evaluate(v);
        if (sgn(d) == 0) throw PoleError(v.get_str());
        return num_.evaluate(v) / d;
    }

    /// c_0..c_order with f(q) = sum c_n (q-1)^n + O((q-1)^(order+1)).
    std::vector<BigRational> taylor_at_one(std::size_t order) const {
        const QPoly n = num_.taylor_shift_one();
        const QPoly d = den_.taylor_shift_one();
        if (sgn(d.coeff(0)) == 0) throw PoleError("1");
        // Power-series division n / d in the variable e = q - 1.
        std::vector<BigRational> out(order + 1);
        const BigRational inv0 = 1 / d.coeff(0);
        for (std::size_t k = 0; k <= order; ++k) {
            BigRational acc = n.coeff(k);
            for (std::size_t j = 1; j <= k && j <= static_cast<std::size_t>(d.degree()); ++j)
                acc -= d.coeff(j) * out[k - j];
            out[k] = acc * inv0;
        }
        return out;
    }

    std::string to_string(const std::string& var = "q") const {
        if (is_polynomial()) return num_.to_string(var);
        return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << f.to_string(); }

private:
    struct Canonical {};
    RationalFunction(Canonical, QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {}

    /// num and den already coprime; only fixes the denominator to be monic.
    static RationalFunction from_canonical(QPoly num, QPoly den) {
        if (den.is_zero()) throw DivisionByZero();
        if (num.is_zero()) return {};
        const BigRational lead = den.leading();
        if (lead != 1) {
            const BigRational inv = 1 / lead;
            num *= inv;
            den *= inv;
        }
        return RationalFunction(Canonical{}, std::move(num), std::move(den));
    }

    void normalize() {
        if (num_.is_zero()) {
            den_ = QPoly(1);
            return;
        }
        if (!den_.is_constant()) {
            const QPoly g = gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = exact_div(num_, g);
                den_ = exact_div(den_, g);
            }
        }
        const BigRational lead = den_.leading();
        if (lead != 1) {
            const BigRational inv = 1 / lead;
            num_ *= inv;
            den_ *= inv;
        }
    }

    QPoly num_;
    QPoly den_;
};

inline RationalFunction adams(const RationalFunction& f, std::size_t k) { return f.adams(k); }
inline RationalFunction bar(const RationalFunction& f) { return f.bar(); }
inline BigRational evaluate(const RationalFunction& f, const BigRational& v) { return f.evaluate(v); }
inline std::vector<BigRational> taylor_at_one(const RationalFunction& f, std::size_t order) {
    return f.taylor_at_one(order);
}

}  // namespace qstable

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace qstable {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// n/d in lowest terms; gmpxx does not canonicalise the two-argument constructor.
inline BigRational make_rational(long n, long d) {
    BigRational r(n, d);
    r.canonicalize();
    return r;
}

/// Dense univariate polynomial in q with exact rational coefficients.
/// Index i of the coefficient vector holds the coefficient of q^i; the
/// highest stored coefficient is nonzero (the zero polynomial is empty).
class QPoly {
public:
    QPoly() = default;
    QPoly(const BigRational& c) {  // NOLINT: constants convert implicitly
        if (sgn(c) != 0) coeffs_.push_back(c);
    }
    QPoly(long c) : QPoly(BigRational(c)) {}  // NOLINT
    explicit QPoly(std::vector<BigRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static QPoly from_ints(std::initializer_list<long> cs) {
        std::vector<BigRational> v;
        v.reserve(cs.size());
        for (long c : cs) v.emplace_back(c);
        return QPoly(std::move(v));
    }

    /// c * q^k
    static QPoly monomial(std::size_t k, const BigRational& c = 1) {
        if (sgn(c) == 0) return {};
        std::vector<BigRational> v(k + 1);
        v[k] = c;
        return QPoly(std::move(v));
    }

    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    const std::vector<BigRational>& coefficients() const { return coeffs_; }

    BigRational coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigRational(0); }
    const BigRational& leading() const { return coeffs_.back(); }

    bool is_constant() const { return coeffs_.size() <= 1; }
    bool is_integral() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const BigRational& c) { return c.get_den() == 1; });
    }

    /// Exponent of the largest power of q dividing the polynomial (0 for zero).
    std::size_t valuation() const {
        std::size_t k = 0;
        while (k < coeffs_.size() && sgn(coeffs_[k]) == 0) ++k;
        return k == coeffs_.size() ? 0 : k;
    }

    QPoly operator-() const {
        QPoly r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    QPoly& operator+=(const QPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    QPoly& operator-=(const QPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    QPoly& operator*=(const BigRational& c) {
        if (sgn(c) == 0) {
            coeffs_.clear();
            return *this;
        }
        for (auto& x : coeffs_) x *= c;
        return *this;
    }

    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
    friend QPoly operator*(QPoly a, const BigRational& c) { return a *= c; }
    friend QPoly operator*(const BigRational& c, QPoly a) { return a *= c; }

    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_integral() && b.is_integral()) return mul_integral(a, b);
        std::vector<BigRational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
        BigRational t;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (sgn(a.coeffs_[i]) == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                t = a.coeffs_[i] * b.coeffs_[j];
                r[i + j] += t;
            }
        }
        return QPoly(std::move(r));
    }
    QPoly& operator*=(const QPoly& o) { return *this = *this * o; }

    friend bool operator==(const QPoly& a, const QPoly& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }

    /// Euclidean division over Q: returns (quotient, remainder).
    friend std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
        if (b.is_zero()) throw DivisionByZero();
        if (a.degree() < b.degree()) return {QPoly{}, a};
        std::vector<BigRational> rem = a.coeffs_;
        std::vector<BigRational> quo(a.coeffs_.size() - b.coeffs_.size() + 1);
        const BigRational inv_lead = 1 / b.leading();
        const std::size_t db = b.coeffs_.size() - 1;
        for (std::size_t k = quo.size(); k-- > 0;) {
            const BigRational c = rem[k + db] * inv_lead;
            quo[k] = c;
            if (sgn(c) == 0) continue;
            for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= c * b.coeffs_[j];
        }
        rem.resize(db);
        return {QPoly(std::move(quo)), QPoly(std::move(rem))};
    }

    /// Exact quotient; throws if b does not divide a.
    friend QPoly exact_div(const QPoly& a, const QPoly& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) throw InvariantViolation("exact_div: nonzero remainder");
        return q;
    }

    BigRational evaluate(const BigRational& v) const {
        BigRational acc = 0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            acc *= v;
            acc += coeffs_[i];
        }
        return acc;
    }

    /// q -> q^k
    QPoly substitute_power(std::size_t k) const {
        if (k == 1 || is_zero()) return *this;
        std::vector<BigRational> r((coeffs_.size() - 1) * k + 1);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) r[i * k] = coeffs_[i];
        return QPoly(std::move(r));
    }

    /// q^deg * p(1/q)
    QPoly reversed() const {
        std::vector<BigRational> r(coeffs_.rbegin(), coeffs_.rend());
        return QPoly(std::move(r));
    }

    /// p * q^k
    QPoly shifted(std::size_t k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<BigRational> r(coeffs_.size() + k);
        std::copy(coeffs_.begin(), coeffs_.end(), r.begin() + static_cast<long>(k));
        return QPoly(std::move(r));
    }

    /// p / q^k, requires q^k | p.
    QPoly unshifted(std::size_t k) const {
        if (k == 0 || is_zero()) return *this;
        if (valuation() < k) throw InvariantViolation("unshifted: power of q does not divide");
        return QPoly(std::vector<BigRational>(coeffs_.begin() + static_cast<long>(k), coeffs_.end()));
    }

    /// Coefficients of p(1 + e) as a polynomial in e.
    QPoly taylor_shift_one() const {
        // Repeated synthetic division (Horner shift).
        std::vector<BigRational> c = coeffs_;
        const std::size_t n = c.size();
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = n - 1; j > i; --j) c[j - 1] += c[j];
        return QPoly(std::move(c));
    }

    QPoly monic() const {
        if (is_zero()) return *this;
        return *this * (1 / leading());
    }

    std::string to_string(const std::string& var = "q") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            const BigRational& c = coeffs_[i];
            if (sgn(c) == 0) continue;
            BigRational a = abs(c);
            if (first) {
                if (sgn(c) < 0) os << "-";
            } else {
                os << (sgn(c) < 0 ? " - " : " + ");
            }
            first = false;
            const bool unit = (a == 1);
            if (i == 0) {
                os << a.get_str();
                continue;
            }
            if (!unit) os << a.get_str() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const QPoly& p) { return os << p.to_string(); }

private:
    void trim() {
        while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
    }

    static QPoly mul_integral(const QPoly& a, const QPoly& b) {
        std::vector<BigInt> r(a.coeffs_.size() + b.coeffs_.size() - 1);
        std::vector<BigInt> bz(b.coeffs_.size());
        for (std::size_t j = 0; j < bz.size(); ++j) bz[j] = b.coeffs_[j].get_num();
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            const BigInt& ai = a.coeffs_[i].get_num();
            if (sgn(ai) == 0) continue;
            for (std::size_t j = 0; j < bz.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), ai.get_mpz_t(), bz[j].get_mpz_t());
        }
        std::vector<BigRational> out(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = BigRational(r[i]);
        return QPoly(std::move(out));
    }

    std::vector<BigRational> coeffs_;
};

/// Coefficients c_0..c_deg with p(q) = sum c_n (q - 1)^n.
inline std::vector<BigRational> in_qminus1_basis(const QPoly& p) {
    return p.taylor_shift_one().coefficients();
}

/// Inverse of in_qminus1_basis.
inline QPoly from_qminus1_basis(const std::vector<BigRational>& c) {
    QPoly acc;
    const QPoly qm1 = QPoly::from_ints({-1, 1});
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * qm1 + QPoly(c[i]);
    return acc;
}

}  // namespace qstable

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

#include "../qpoly.hpp"

namespace qstable::detail {

// Integer polynomial helpers backing the rational-function gcd.
using ZPoly = std::vector<BigInt>;

inline void ztrim(ZPoly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

/// Scales p to a primitive integer polynomial with positive leading coefficient.
inline ZPoly primitive_part(const QPoly& p) {
    const auto& c = p.coefficients();
    BigInt l = 1;
    for (const auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    ZPoly z(c.size());
    BigInt g = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        z[i] = c[i].get_num() * (l / c[i].get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z[i].get_mpz_t());
    }
    if (sgn(g) == 0) return {};
    if (sgn(z.back()) < 0) g = -g;
    for (auto& x : z) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return z;
}

inline ZPoly make_primitive(ZPoly z) {
    ztrim(z);
    if (z.empty()) return z;
    BigInt g = 0;
    for (const auto& x : z) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (sgn(z.back()) < 0) g = -g;
    for (auto& x : z) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return z;
}

/// True iff b divides a in Z[q].
inline bool zdivides(const ZPoly& b, ZPoly a) {
    if (b.empty()) return false;
    if (a.size() < b.size()) return a.empty();
    const std::size_t db = b.size() - 1;
    BigInt c;
    for (std::size_t k = a.size() - b.size() + 1; k-- > 0;) {
        BigInt& top = a[k + db];
        if (sgn(top) == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), b.back().get_mpz_t())) return false;
        mpz_divexact(c.get_mpz_t(), top.get_mpz_t(), b.back().get_mpz_t());
        for (std::size_t j = 0; j <= db; ++j) mpz_submul(a[k + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
    }
    for (std::size_t i = 0; i < db; ++i)
        if (sgn(a[i]) != 0) return false;
    return true;
}

inline BigInt max_norm(const ZPoly& p) {
    BigInt m = 0;
    for (const auto& x : p)
        if (abs(x) > m) m = abs(x);
    return m;
}

inline BigInt zeval(const ZPoly& p, const BigInt& x) {
    BigInt acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
        acc *= x;
        acc += p[i];
    }
    return acc;
}

/// Symmetric x-adic digits of h.
inline ZPoly interpolate_digits(BigInt h, const BigInt& x) {
    ZPoly out;
    const BigInt half = x / 2;
    BigInt g;
    while (sgn(h) != 0) {
        mpz_fdiv_r(g.get_mpz_t(), h.get_mpz_t(), x.get_mpz_t());
        if (g > half) g -= x;
        out.push_back(g);
        h -= g;
        mpz_divexact(h.get_mpz_t(), h.get_mpz_t(), x.get_mpz_t());
    }
    return out;
}

/// Heuristic gcd (evaluate at a large point, take the integer gcd, read the
/// digits back). The evaluation point always satisfies x >= 2 min(|a|,|b|) + 2,
/// which makes a candidate that divides both inputs the true gcd.
inline std::optional<ZPoly> heuristic_gcd(const ZPoly& a, const ZPoly& b) {
    BigInt x = 2 * std::min(max_norm(a), max_norm(b)) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const BigInt fa = zeval(a, x);
        const BigInt fb = zeval(b, x);
        if (sgn(fa) != 0 && sgn(fb) != 0) {
            BigInt g;
            mpz_gcd(g.get_mpz_t(), fa.get_mpz_t(), fb.get_mpz_t());
            ZPoly h = make_primitive(interpolate_digits(g, x));
            if (!h.empty() && zdivides(h, a) && zdivides(h, b)) return h;
        }
        x = x * 73794 / 27011 + 1;
    }
    return std::nullopt;
}

/// Plain Euclid over Q, monic result.
inline QPoly euclid_gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly r = divmod(a, b).second;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

}  // namespace qstable::detail

namespace qstable {

/// Monic gcd over Q (zero only when both inputs are zero).
inline QPoly gcd(const QPoly& a, const QPoly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return QPoly(1);
    const std::size_t v = std::min(a.valuation(), b.valuation());
    const detail::ZPoly za = detail::primitive_part(a.unshifted(v));
    const detail::ZPoly zb = detail::primitive_part(b.unshifted(v));
    if (auto h = detail::heuristic_gcd(za, zb)) {
        std::vector<BigRational> c(h->size());
        for (std::size_t i = 0; i < h->size(); ++i) c[i] = BigRational((*h)[i]);
        return QPoly(std::move(c)).monic().shifted(v);
    }
    return detail::euclid_gcd(a, b);
}

}  // namespace qstable

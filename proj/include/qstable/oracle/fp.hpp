#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "../errors.hpp"
#include "../number_theory.hpp"

namespace qstable::oracle {

using Fp = std::uint32_t;

/// Arithmetic in F_p for a small prime p.
class PrimeField {
public:
    explicit PrimeField(Fp p) : p_(p) {
        if (p < 2 || p > 251 || !is_prime(static_cast<long>(p)))
            throw PreconditionError("oracle field: " + std::to_string(p) + " is not a supported prime");
        for (Fp g = 1; g < p; ++g) {
            Fp x = 1;
            Fp order = 0;
            do {
                x = mul(x, g);
                ++order;
            } while (x != 1);
            if (order == p - 1) {
                root_ = g;
                break;
            }
        }
    }

    Fp p() const { return p_; }
    Fp add(Fp a, Fp b) const { return (a + b) % p_; }
    Fp sub(Fp a, Fp b) const { return (a + p_ - b) % p_; }
    Fp mul(Fp a, Fp b) const { return (a * b) % p_; }
    Fp neg(Fp a) const { return (p_ - a) % p_; }
    Fp inv(Fp a) const {
        if (a == 0) throw DivisionByZero();
        Fp r = 1;
        for (Fp e = p_ - 2, b = a; e; e >>= 1, b = mul(b, b))
            if (e & 1) r = mul(r, b);
        return r;
    }
    /// A generator of F_p^*.
    Fp primitive_root() const { return root_; }

private:
    Fp p_;
    Fp root_ = 1;
};

/// Dense matrix over F_p, row-major.
struct FpMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Fp> a;

    FpMatrix() = default;
    FpMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    static FpMatrix identity(std::size_t n) {
        FpMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    Fp& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    Fp operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    bool is_zero() const {
        for (Fp x : a)
            if (x) return false;
        return true;
    }
    friend bool operator==(const FpMatrix&, const FpMatrix&) = default;
};

inline FpMatrix mul(const PrimeField& f, const FpMatrix& x, const FpMatrix& y) {
    if (x.cols != y.rows) throw PreconditionError("matrix shape mismatch");
    FpMatrix r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const Fp xik = x(i, k);
            if (!xik) continue;
            for (std::size_t j = 0; j < y.cols; ++j) r(i, j) = f.add(r(i, j), f.mul(xik, y(k, j)));
        }
    return r;
}

/// Row-reduces m in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(const PrimeField& f, FpMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < m.cols && row < m.rows; ++c) {
        std::size_t sel = row;
        while (sel < m.rows && m(sel, c) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(sel, j), m(row, j));
        const Fp inv = f.inv(m(row, c));
        for (std::size_t j = 0; j < m.cols; ++j) m(row, j) = f.mul(m(row, j), inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || m(i, c) == 0) continue;
            const Fp k = m(i, c);
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = f.sub(m(i, j), f.mul(k, m(row, j)));
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(const PrimeField& f, FpMatrix m) { return row_reduce(f, m).size(); }

/// Basis of {v : m v = 0}, one vector per free column.
inline std::vector<std::vector<Fp>> null_space(const PrimeField& f, FpMatrix m) {
    const auto pivots = row_reduce(f, m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Fp>> basis;
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Fp> v(m.cols, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(m(r, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

inline FpMatrix inverse(const PrimeField& f, const FpMatrix& g) {
    const std::size_t n = g.rows;
    FpMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = g(i, j);
        aug(i, n + i) = 1;
    }
    const auto piv = row_reduce(f, aug);
    if (piv.size() < n || piv[n - 1] != n - 1) throw NotInvertible();
    FpMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
    return r;
}

/// Vectors of F_p^n are encoded as sum_i v_i p^i.
inline std::uint64_t encode(const std::vector<Fp>& v, Fp p) {
    std::uint64_t c = 0;
    for (std::size_t i = v.size(); i-- > 0;) c = c * p + v[i];
    return c;
}

inline std::vector<Fp> decode(std::uint64_t c, std::size_t n, Fp p) {
    std::vector<Fp> v(n);
    for (std::size_t i = 0; i < n; ++i, c /= p) v[i] = static_cast<Fp>(c % p);
    return v;
}

inline std::uint64_t int_pow(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= b;
    return r;
}

/// A subspace of F_p^n: reduced row echelon basis and membership over all codes.
struct Subspace {
    std::size_t dim = 0;
    std::vector<std::vector<Fp>> basis;
    std::vector<std::uint64_t> basis_codes;
    std::vector<char> member;
};

/// Every subspace of F_p^n, ordered by dimension, one per reduced echelon form.
inline std::vector<Subspace> all_subspaces(const PrimeField& f, std::size_t n) {
    const Fp p = f.p();
    const std::uint64_t total = int_pow(p, n);
    std::vector<Subspace> out;
    for (std::size_t k = 0; k <= n; ++k) {
        // choose pivot columns c_0 < ... < c_{k-1}
        std::vector<std::size_t> piv(k);
        auto choose = [&](auto&& self, std::size_t idx, std::size_t start) -> void {
            if (idx == k) {
                // free slots: row r, column c > piv[r] that is not a pivot
                std::vector<std::pair<std::size_t, std::size_t>> slots;
                for (std::size_t r = 0; r < k; ++r)
                    for (std::size_t c = piv[r] + 1; c < n; ++c)
                        if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(r, c);
                const std::uint64_t combos = int_pow(p, slots.size());
                for (std::uint64_t code = 0; code < combos; ++code) {
                    Subspace s;
                    s.dim = k;
                    s.basis.assign(k, std::vector<Fp>(n, 0));
                    for (std::size_t r = 0; r < k; ++r) s.basis[r][piv[r]] = 1;
                    std::uint64_t c = code;
                    for (const auto& [r, col] : slots) {
                        s.basis[r][col] = static_cast<Fp>(c % p);
                        c /= p;
                    }
                    for (const auto& b : s.basis) s.basis_codes.push_back(encode(b, p));
                    s.member.assign(total, 0);
                    const std::uint64_t spans = int_pow(p, k);
                    for (std::uint64_t w = 0; w < spans; ++w) {
                        const auto coef = decode(w, k, p);
                        std::vector<Fp> v(n, 0);
                        for (std::size_t r = 0; r < k; ++r)
                            for (std::size_t j = 0; j < n; ++j) v[j] = f.add(v[j], f.mul(coef[r], s.basis[r][j]));
                        s.member[encode(v, p)] = 1;
                    }
                    out.push_back(std::move(s));
                }
                return;
            }
            for (std::size_t c = start; c < n; ++c) {
                piv[idx] = c;
                self(self, idx + 1, c + 1);
            }
        };
        choose(choose, 0, 0);
    }
    return out;
}

/// #GL_n(F_p) as an exact integer.
inline mpz_class gl_order_at(std::size_t n, Fp p) {
    mpz_class r = 1, pn, pi = 1;
    mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
    for (std::size_t i = 0; i < n; ++i) {
        r *= pn - pi;
        pi *= p;
    }
    return r;
}

}  // namespace qstable::oracle

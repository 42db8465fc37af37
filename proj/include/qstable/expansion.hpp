#pragma once

#include <optional>
#include <string>
#include <vector>

#include "counting.hpp"
#include "number_theory.hpp"
#include "quiver.hpp"
#include "series.hpp"

namespace qstable {

/// One row per a_alpha, everything read off its (q-1)-expansion. The
/// nonnegativity flag is an observation, not a claim.
struct PositivityRow {
    DimVector alpha;
    QPoly poly_q;
    std::vector<BigRational> poly_qminus1;
    BigRational constant_term;
    BigRational linear_term;
    std::optional<mpz_class> necklace;  // loop quivers only
    bool nonnegative = true;
};

/// m when the quiver is a single vertex with m >= 1 loops.
inline std::optional<long> loop_count(const Quiver& q) {
    if (q.size() != 1 || q.arrow_count(0, 0) < 1) return std::nullopt;
    return q.arrow_count(0, 0);
}

inline std::vector<PositivityRow> positivity_report(const Quiver& q, const CountTable<QPoly>& table) {
    std::vector<PositivityRow> out;
    const auto m = loop_count(q);
    for (const auto& [alpha, p] : table.entries) {
        PositivityRow row{alpha, p, in_qminus1_basis(p), 0, 0, std::nullopt, true};
        if (!row.poly_qminus1.empty()) row.constant_term = row.poly_qminus1[0];
        if (row.poly_qminus1.size() > 1) row.linear_term = row.poly_qminus1[1];
        for (const auto& c : row.poly_qminus1)
            if (sgn(c) < 0) row.nonnegative = false;
        if (m) row.necklace = necklace_count(*m, alpha[0]);
        out.push_back(std::move(row));
    }
    return out;
}

/// Coefficients of (1 - m t)^k up to t^n, k any integer.
inline std::vector<BigRational> one_minus_mt_power(long m, long k, long n) {
    std::vector<BigRational> c(static_cast<std::size_t>(n) + 1);
    BigRational mj = 1;
    for (long j = 0; j <= n; ++j) {
        c[static_cast<std::size_t>(j)] = generalized_binomial(-k - 1, j) * mj;
        mj *= m;
    }
    return c;
}

/// Coefficients of a one-variable series up to t^n.
inline std::vector<BigRational> univariate_coefficients(const RatSeries& s, long n) {
    std::vector<BigRational> c(static_cast<std::size_t>(n) + 1);
    for (long d = 0; d <= n; ++d) c[static_cast<std::size_t>(d)] = s.coeff(DimVector{d});
    return c;
}

inline std::vector<BigRational> truncated_product(const std::vector<BigRational>& a, const std::vector<BigRational>& b) {
    std::vector<BigRational> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < c.size() && j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

/// C(m,2) t (t-1) / (1 - m t)^2 up to t^n.
inline std::vector<BigRational> f1_conjectured(long m, long n) {
    std::vector<BigRational> num(static_cast<std::size_t>(n) + 1);
    const BigRational c2 = make_rational(m * (m - 1), 2);
    if (n >= 1) num[1] = -c2;
    if (n >= 2) num[2] = c2;
    return truncated_product(num, one_minus_mt_power(m, -2, n));
}

struct F1Comparison {
    long m = 0;
    std::vector<BigRational> observed;
    std::vector<BigRational> conjectured;
    bool match = false;
};

/// f_1 of a loop quiver against the conjectured closed form, up to t^max_height.
inline F1Comparison compare_f1(long m, const std::vector<RatSeries>& expansion) {
    if (expansion.size() < 2) throw PreconditionError("compare_f1 needs the expansion to order >= 1");
    const long n = expansion[1].truncation().max_height;
    F1Comparison c{m, univariate_coefficients(expansion[1], n), f1_conjectured(m, n), false};
    c.match = c.observed == c.conjectured;
    return c;
}

struct DegreeObservation {
    long n = 0;
    long exponent = 0;  // 3n - 1
    long observed_degree = -1;  // highest nonzero power of t within the truncation, -1 if zero
    long truncation = 0;
};

/// Observed t-degree of f_n(m,t) (1 - m t)^{3n-1}; only meaningful when it stays below the truncation.
inline std::vector<DegreeObservation> observe_degrees(long m, const std::vector<RatSeries>& expansion) {
    std::vector<DegreeObservation> out;
    for (std::size_t n = 0; n < expansion.size(); ++n) {
        const long h = expansion[n].truncation().max_height;
        const long e = 3 * static_cast<long>(n) - 1;
        const auto prod = truncated_product(univariate_coefficients(expansion[n], h), one_minus_mt_power(m, e, h));
        DegreeObservation d{static_cast<long>(n), e, -1, h};
        for (long k = h; k >= 0; --k)
            if (sgn(prod[static_cast<std::size_t>(k)]) != 0) {
                d.observed_degree = k;
                break;
            }
        out.push_back(d);
    }
    return out;
}

/// (a(q) - x)/(1 - q) at q = 1, for a one-vertex table.
inline RatSeries linear_part_at_one(const CountTable<QPoly>& table, const TruncationSpec& t) {
    RatSeries s(t);
    const RationalFunction inv(QPoly(1), QPoly::from_ints({1, -1}));
    for (const auto& [alpha, p] : table.entries) {
        if (!t.accepts(alpha)) continue;
        QPoly c = p;
        if (alpha.height() == 1) c -= QPoly(1);
        s.set(alpha, (RationalFunction(c) * inv).taylor_at_one(0)[0]);
    }
    return s;
}

/// Log(1 - m x) with psi_k acting only on x.
inline RatSeries log_one_minus_mx(long m, const TruncationSpec& t) {
    RatSeries f = RatSeries::one(t);
    f.set(DimVector{1}, BigRational(-m));
    return log_series(f);
}

}  // namespace qstable

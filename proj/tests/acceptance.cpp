// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "qstable/oracle/oracle.hpp"
#include "qstable/qstable.hpp"

using namespace qstable;
using namespace qstable::test_support;

namespace {

const RationalFunction kInvOneMinusQ(QPoly(1), QPoly::from_ints({1, -1}));

struct Verdict {
    bool ok = true;
    std::vector<std::string> notes;  // failures, or observations for report-only criteria

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void absorb(const CheckResult& r, const std::string& name, int min_cases) {
        require(r.ok, name + ": " + r.detail);
        require(r.cases >= min_cases, name + ": only " + std::to_string(r.cases) + " cases");
    }
};

struct GridCase {
    std::string name;
    CountingContext ctx;
};

CountingContext half(Quiver q, long h) { return CountingContext::make(std::move(q), Stability{{1, 0}}, make_rational(1, 2), h); }

/// The oracle grid: 1-loop, 2-loop, A2, Kronecker with theta = 0, plus
/// theta = (1,0) at slope 1/2 for the two-vertex quivers.
std::vector<GridCase> grid(long h) {
    return {{"1-loop", CountingContext::trivial(Quiver::loops(1), h)},
            {"2-loop", CountingContext::trivial(Quiver::loops(2), h)},
            {"A2", CountingContext::trivial(Quiver::linear(2), h)},
            {"Kronecker", CountingContext::trivial(Quiver::kronecker(), h)},
            {"A2 theta=(1,0)", half(Quiver::linear(2), h)},
            {"Kronecker theta=(1,0)", half(Quiver::kronecker(), h)}};
}

/// Oracle runs shared by criteria 3 and 4: one tally per (case, alpha, p).
struct OracleRun {
    std::string name;
    DimVector alpha;
    long p;
    BigRational r_formula, r_oracle, a_formula, a_oracle;
};

std::vector<OracleRun> oracle_grid(Verdict& fail) {
    std::vector<OracleRun> runs;
    for (const auto& g : grid(4)) {
        const auto table = a_series(g.ctx);
        const auto r = r_table(g.ctx);
        for (long p : {2L, 3L}) {
            const long limit = g.ctx.quiver.size() == 1 && p == 2 ? 4 : 3;
            for (const auto& alpha : support(g.ctx.trunc)) {
                if (alpha.is_zero() || alpha.height() > limit) continue;
                try {
                    const auto fp = static_cast<oracle::Fp>(p);
                    const auto tal = oracle::tally(g.ctx.quiver, alpha, g.ctx.theta, fp);
                    runs.push_back({g.name, alpha, p, r.at(alpha).evaluate(p),
                                    oracle::count_semistable_ratio(tal, alpha, fp), table.at(alpha).evaluate(p),
                                    BigRational(oracle::count_abs_stable_classes(tal, alpha, fp))});
                } catch (const Error& e) {
                    fail.require(false, g.name + " " + alpha.to_string() + " p=" + std::to_string(p) + ": " + e.what());
                }
            }
        }
    }
    return runs;
}

Verdict criterion1() {
    Verdict v;
    v.absorb(check_exp_log_inverse(101, 50, 5), "Exp/Log inverse", 50);
    v.absorb(check_exp_additive(202, 50, 5), "Exp additive", 50);
    v.absorb(check_power_formula(303, 50, 5), "power formula", 50);
    v.absorb(check_heine(5, -25, 24), "p = Exp(x/(1-q)) and p(n;x)", 50);
    v.absorb(check_p_lambda_factorisation(404, 50, 1, 5), "p(lambda) = p S_lambda(bar p), 1 var", 50);
    v.absorb(check_p_lambda_factorisation(505, 50, 2, 5), "p(lambda) = p S_lambda(bar p), 2 vars", 50);
    return v;
}

Verdict criterion2() {
    Verdict v;
    for (const Quiver& q : {Quiver::loops(1), Quiver::loops(2), Quiver::linear(2), Quiver::linear(3), Quiver::kronecker()}) {
        const auto ctx = CountingContext::trivial(q, 6);
        v.require(r_series(ctx) == bar(apply_T(p_series(ctx.trunc), ctx.ringel)),
                  "r != bar(Tp) for " + std::to_string(q.size()) + "-vertex quiver");
    }
    for (const Quiver& q : {Quiver::linear(2), Quiver::linear(3), Quiver::kronecker()}) {
        const auto ctx = CountingContext::trivial(q, 6);
        const QSeries btp = bar(apply_T(p_series(ctx.trunc), ctx.ringel));
        v.require(twisted_mul(btp, p_series(ctx.trunc), ctx.ringel) == QSeries::one(ctx.trunc),
                  "bar(Tp) o p != 1");
        for (const auto& a : support(ctx.trunc))
            if (!a.is_zero())
                v.require(qbinom_vec(minus_ringel_times(ctx.ringel, a), a).is_zero(),
                          "[-R a, a] != 0 at " + a.to_string());
    }
    return v;
}

Verdict criterion34(const std::vector<OracleRun>& runs, Verdict setup, bool for_a) {
    Verdict v = std::move(setup);
    for (const auto& r : runs) {
        const auto& f = for_a ? r.a_formula : r.r_formula;
        const auto& o = for_a ? r.a_oracle : r.r_oracle;
        v.require(f == o, r.name + " " + r.alpha.to_string() + " p=" + std::to_string(r.p) + ": formula " +
                              f.get_str() + " vs oracle " + o.get_str());
    }
    v.require(runs.size() >= 40, "grid too small: " + std::to_string(runs.size()));
    if (for_a) {
        const auto one = a_series(CountingContext::trivial(Quiver::loops(1), 6));
        v.require(one.at(DimVector{1}) == QPoly::monomial(1), "1-loop a_1 != q");
        for (long d = 2; d <= 6; ++d) v.require(one.at(DimVector{d}).is_zero(), "1-loop a_d != 0");
    }
    return v;
}

Verdict criterion5() {
    Verdict v;
    for (const auto& g : grid(6)) {
        const auto a = a_series(g.ctx);
        const QSeries e = exp_series(to_series(a, g.ctx.trunc) * kInvOneMinusQ);
        v.require(twisted_mul(r_series(g.ctx), e, g.ctx.ringel) == QSeries::one(g.ctx.trunc),
                  "round trip fails for " + g.name);
    }
    return v;
}

Verdict criterion6() {
    Verdict v;
    for (const Quiver& q : {Quiver::loops(1), Quiver::loops(2), Quiver::loops(3), Quiver::loops(4), Quiver::linear(2)}) {
        const auto ctx = CountingContext::trivial(q, 6);
        try {
            const QSeries direct = f_series(ctx, a_series(ctx));
            const QSeries rec = f_recursive(ctx);
            v.require(direct == rec, "f_series != f_recursive");
            v.require(f_at_one(ctx) == taylor_slice_at_one(direct, 0), "f_at_one != Taylor slice");
        } catch (const InvariantViolation& e) {
            v.require(false, e.what());
        }
    }
    return v;
}

Verdict criterion7() {
    Verdict v;
    for (long m = 1; m <= 4; ++m) {
        const auto ctx = CountingContext::trivial(Quiver::loops(m), 8);
        RatSeries expect = RatSeries::one(ctx.trunc);
        expect.set(DimVector{1}, BigRational(-m));
        v.require(f_at_one(ctx) == expect, "q=1 recursion != 1 - mx for m=" + std::to_string(m));
        v.require(taylor_slice_at_one(f_recursive(ctx), 0) == expect,
                  "Taylor specialisation != 1 - mx for m=" + std::to_string(m));
        for (long n = 1; n <= 8; ++n) {
            const auto c = truncated_product(one_minus_mt_power(1, n - m * n - 1, n), one_minus_mt_power(m, 1, n));
            v.require(sgn(c[static_cast<std::size_t>(n)]) == 0,
                      "x^" + std::to_string(n) + " of (1-x)^{n-mn-1}(1-mx) != 0 for m=" + std::to_string(m));
        }
    }
    return v;
}

Verdict criterion8() {
    Verdict v;
    for (long m : {2L, 3L}) {
        const auto ctx = CountingContext::trivial(Quiver::loops(m), 6);
        for (const auto& row : positivity_report(ctx.quiver, a_series(ctx))) {
            const long d = row.alpha[0];
            if (d < 2) continue;
            v.require(row.linear_term == BigRational(necklace_count(m, d)),
                      "m=" + std::to_string(m) + " d=" + std::to_string(d) + ": linear term " +
                          row.linear_term.get_str());
            v.require(sgn(row.constant_term) == 0, "nonzero constant term at d=" + std::to_string(d));
        }
    }
    return v;
}

/// Report-only: conjectural statements are observed, never asserted.
Verdict criterion9() {
    Verdict v;
    for (long m : {2L, 3L}) {
        const auto ctx = CountingContext::trivial(Quiver::loops(m), 6);
        const auto table = a_series(ctx);
        bool all_nonneg = true;
        for (const auto& row : positivity_report(ctx.quiver, table)) all_nonneg = all_nonneg && row.nonnegative;
        v.notes.push_back("m=" + std::to_string(m) + ": a_d in N[q-1] for d<=6: " + (all_nonneg ? "yes" : "no"));
        const auto ex = q1_expansion(ctx, table, 2);
        v.notes.push_back("m=" + std::to_string(m) + ": f_1 vs C(m,2)t(t-1)/(1-mt)^2 to t^6: " +
                          (compare_f1(m, ex).match ? "match" : "differs"));
        for (const auto& d : observe_degrees(m, ex))
            v.notes.push_back("m=" + std::to_string(m) + ": deg_t f_" + std::to_string(d.n) + "(1-mt)^" +
                              std::to_string(d.exponent) + " = " + std::to_string(d.observed_degree) +
                              " within truncation " + std::to_string(d.truncation));
    }
    return v;
}

Verdict criterion10() {
    Verdict v;
    const auto ctx = CountingContext::trivial(Quiver::loops(2), 4);
    const auto a = a_series(ctx);
    const DimVector one{1};
    for (long r = 1; r <= 4; ++r) {
        QPoly sum;
        for (long k : divisors(r)) sum += s_alpha_r(a, one, k) * BigRational(k);
        v.require(sum == a.at(one).substitute_power(static_cast<std::size_t>(r)),
                  "sum_{k|r} k s_{k,k} != psi_r(a_1) at r=" + std::to_string(r));
    }
    const TruncationSpec t(1, 4);
    std::vector<RationalFunction> sd(5);
    for (long r = 1; r <= 4; ++r) sd[static_cast<std::size_t>(r)] = RationalFunction(s_alpha_r(a, one, r));
    RandomInputs in(77);
    for (int i = 0; i < 10; ++i) {
        const QSeries f = in.series(t, true, 0.6);
        v.require(pow_series(f, QSeries::constant(t, RationalFunction(a.at(one)))) == power_formula_product(f, sd),
                  "Pow(f, a_1) != prod psi_r(f)^{s_r}");
    }
    for (oracle::Fp p : {2u, 3u}) {
        const auto tal = oracle::tally(ctx.quiver, DimVector{2}, ctx.theta, p);
        const BigRational formula = s_alpha_r(a, one, 2).evaluate(p);
        const BigRational got(oracle::count_stable_with_r(tal, DimVector{2}, p, 2));
        v.require(formula == got, "s_{2,2} at p=" + std::to_string(p) + ": " + formula.get_str() + " vs " + got.get_str());
    }
    return v;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int n, const std::string& title, const std::function<Verdict()>& run) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line.precision(2);
        line << std::fixed << (v.ok ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " (" << secs << " s)";
        std::cout << line.str() << "\n";
        for (const auto& note : v.notes) std::cout << "    " << note << "\n";
        if (!v.ok) ++failures;
    };

    report(1, "lambda-ring identities on random inputs", criterion1);
    report(2, "r = bar(Tp) at theta = 0; acyclic inverse and [-R a, a] = 0", criterion2);
    Verdict grid_setup;
    std::vector<OracleRun> runs;
    const auto t0 = std::chrono::steady_clock::now();
    runs = oracle_grid(grid_setup);
    std::printf("    (oracle grid: %zu runs in %.2f s)\n", runs.size(),
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    report(3, "oracle equivalence for r_alpha", [&] { return criterion34(runs, grid_setup, false); });
    report(4, "oracle equivalence for a_alpha", [&] { return criterion34(runs, grid_setup, true); });
    report(5, "r o Exp(a/(1-q)) = 1 to height 6", criterion5);
    report(6, "f_series = f_recursive; f at q=1 agrees with the Taylor slice", criterion6);
    report(7, "f at q=1 is 1 - mx to height 8", criterion7);
    report(8, "(q-1)-linear term of a_d counts primitive necklaces", criterion8);
    report(9, "positivity, f_1 and degree observations (report only)", criterion9);
    report(10, "s_{r,r} identities and oracle s_{2,2}", criterion10);
    return failures;
}

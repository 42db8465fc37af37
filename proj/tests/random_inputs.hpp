#pragma once

#include <random>
#include <vector>

#include "qstable/qstable.hpp"

namespace qstable::test_support {

// Small random inputs for property tests; the seed fixes every run.
class RandomInputs {
public:
    explicit RandomInputs(unsigned seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

    QPoly poly(long max_deg, long bound = 3) {
        std::vector<BigRational> c(static_cast<std::size_t>(integer(0, max_deg)) + 1);
        for (auto& x : c) x = make_rational(integer(-bound, bound), integer(1, 2));
        return QPoly(std::move(c));
    }

    QPoly nonzero_poly(long max_deg, long bound = 3) {
        for (;;) {
            QPoly p = poly(max_deg, bound);
            if (!p.is_zero()) return p;
        }
    }

    /// Denominators mimic the ones that occur in practice: products of
    /// 1 - q^k, powers of q, and an occasional arbitrary factor.
    RationalFunction rational_function() {
        QPoly den(1);
        const long factors = integer(0, 2);
        for (long i = 0; i < factors; ++i)
            den *= QPoly(1) - QPoly::monomial(static_cast<std::size_t>(integer(1, 3)));
        if (integer(0, 3) == 0) den *= QPoly::monomial(1);
        if (integer(0, 3) == 0) den *= nonzero_poly(2);
        return RationalFunction(poly(3), den);
    }

    QSeries series(const TruncationSpec& t, bool with_constant, double density = 0.7) {
        QSeries s(t);
        std::bernoulli_distribution keep(density);
        for (const auto& a : support(t)) {
            if (a.is_zero()) {
                if (with_constant) s.set(a, RationalFunction(1));
                continue;
            }
            if (keep(rng_)) s.set(a, rational_function());
        }
        return s;
    }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

}  // namespace qstable::test_support

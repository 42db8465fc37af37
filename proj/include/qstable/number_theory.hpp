#pragma once

#include <gmpxx.h>

#include <vector>

#include "errors.hpp"

namespace qstable {

/// Classical Moebius function.
inline int moebius(long n) {
    if (n < 1) throw PreconditionError("moebius: n must be >= 1");
    int sign = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

inline std::vector<long> divisors(long n) {
    if (n < 1) throw PreconditionError("divisors: n must be >= 1");
    std::vector<long> lo, hi;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        lo.push_back(d);
        if (d * d != n) hi.push_back(n / d);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Number of primitive (aperiodic) necklaces with d beads in m colours:
/// (1/d) sum_{k | d} mobius(d/k) m^k.
inline mpz_class necklace_count(long m, long d) {
    if (m < 1 || d < 1) throw PreconditionError("necklace_count: m and d must be >= 1");
    mpz_class sum = 0;
    for (long k : divisors(d)) {
        mpz_class mk;
        mpz_ui_pow_ui(mk.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
        sum += moebius(d / k) * mk;
    }
    if (!mpz_divisible_ui_p(sum.get_mpz_t(), static_cast<unsigned long>(d)))
        throw InvariantViolation("necklace_count: sum not divisible by d");
    return sum / d;
}

}  // namespace qstable

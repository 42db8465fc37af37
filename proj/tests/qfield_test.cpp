#include <gtest/gtest.h>

#include "qstable/qfield.hpp"
#include "random_inputs.hpp"

using namespace qstable;

namespace {

RationalFunction rf(std::initializer_list<long> num, std::initializer_list<long> den = {1}) {
    return RationalFunction(QPoly::from_ints(num), QPoly::from_ints(den));
}

const RationalFunction q = rf({0, 1});

std::vector<BigRational> rats(std::initializer_list<long> xs) {
    std::vector<BigRational> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

TEST(QPoly, DivmodAndEvaluation) {
    const QPoly a = QPoly::from_ints({1, 0, -1});  // 1 - q^2
    const QPoly b = QPoly::from_ints({1, -1});     // 1 - q
    auto [quo, rem] = divmod(a, b);
    EXPECT_EQ(quo, QPoly::from_ints({1, 1}));
    EXPECT_TRUE(rem.is_zero());
    EXPECT_EQ(a.evaluate(3), BigRational(-8));
    EXPECT_THROW(divmod(a, QPoly()), DivisionByZero);
}

TEST(QPoly, GcdMatchesEuclid) {
    test_support::RandomInputs in(7);
    for (int i = 0; i < 200; ++i) {
        const QPoly common = in.nonzero_poly(3);
        const QPoly a = in.nonzero_poly(4) * common;
        const QPoly b = in.nonzero_poly(4) * common;
        EXPECT_EQ(gcd(a, b), detail::euclid_gcd(a, b)) << a << " | " << b;
    }
    // Cyclotomic factors with large multiplicity.
    QPoly x(1), y(1);
    for (int k = 1; k <= 8; ++k) {
        x *= QPoly(1) - QPoly::monomial(static_cast<std::size_t>(k));
        y *= QPoly(1) - QPoly::monomial(static_cast<std::size_t>(2 * k));
    }
    EXPECT_EQ(gcd(x, y), detail::euclid_gcd(x, y));
}

TEST(RationalFunction, Arithmetic) {
    const RationalFunction inv = rf({1}, {1, -1});
    EXPECT_TRUE((inv + rf({-1}, {1, -1})).is_zero());
    // (1-q^2)/(1-q) = 1 + q by long division
    EXPECT_EQ(rf({1, 0, -1}) / rf({1, -1}), rf({1, 1}));
    EXPECT_EQ(rf({1, 0, -1}, {1, -1}), rf({1, 1}));
    EXPECT_EQ(inv * RationalFunction(1), inv);
    EXPECT_THROW(inv / RationalFunction(), DivisionByZero);
    EXPECT_THROW(rf({1}, {0}), DivisionByZero);
}

TEST(RationalFunction, CanonicalForm) {
    const RationalFunction f = rf({2, -2}, {4, 0, -4});  // 2(1-q) / 4(1-q^2) = (1/2)/(1+q)... monic den
    EXPECT_EQ(f.den(), QPoly::from_ints({1, 1}));
    EXPECT_EQ(f.num(), QPoly(make_rational(1, 2)));
    EXPECT_EQ(RationalFunction::q_power(-2) * RationalFunction::q_power(2), RationalFunction(1));
}

TEST(RationalFunction, Adams) {
    EXPECT_EQ(rf({1}, {1, -1}).adams(2), rf({1}, {1, 0, -1}));
    const RationalFunction f = rf({0, 1}, {1, 1});  // q/(1+q)
    EXPECT_EQ(f.adams(1), f);
    EXPECT_EQ(f.adams(2).adams(3), f.adams(6));
    // composition checked through the Taylor coefficients at q = 1 of q^6/(1+q^6)
    EXPECT_EQ(f.adams(6).taylor_at_one(3), rf({0, 0, 0, 0, 0, 0, 1}, {1, 0, 0, 0, 0, 0, 1}).taylor_at_one(3));
}

TEST(RationalFunction, Bar) {
    EXPECT_EQ(q.bar(), RationalFunction::q_power(-1));
    // 1/(1 - 1/q) = q/(q - 1)
    EXPECT_EQ(rf({1}, {1, -1}).bar(), rf({0, 1}, {-1, 1}));
    EXPECT_EQ(RationalFunction(make_rational(5, 3)).bar(), RationalFunction(make_rational(5, 3)));
}

TEST(RationalFunction, Evaluate) {
    EXPECT_EQ(rf({1}, {1, -1}).evaluate(2), BigRational(-1));
    EXPECT_EQ(rf({1, 0, -1}, {1, -1}).evaluate(1), BigRational(2));
    try {
        rf({1}, {1, -1}).evaluate(1);
        FAIL() << "expected a pole";
    } catch (const PoleError& e) {
        EXPECT_EQ(e.point, "1");
    }
}

TEST(RationalFunction, TaylorAtOne) {
    for (long m = 0; m < 6; ++m) {
        auto c = RationalFunction(QPoly::monomial(static_cast<std::size_t>(m))).taylor_at_one(1);
        EXPECT_EQ(c, rats({1, m}));
    }
    EXPECT_EQ(rf({1, 0, -1}, {1, -1}).taylor_at_one(1), rats({2, 1}));
    EXPECT_THROW(rf({1}, {1, -1}).taylor_at_one(3), PoleError);
    // 1/q = 1/(1+e) = 1 - e + e^2 - ...
    EXPECT_EQ(RationalFunction::q_power(-1).taylor_at_one(3), rats({1, -1, 1, -1}));
}

TEST(QMinus1Basis, Examples) {
    EXPECT_EQ(in_qminus1_basis(QPoly::from_ints({0, 1})), rats({1, 1}));
    EXPECT_EQ(in_qminus1_basis(QPoly::from_ints({0, 0, 1})), rats({1, 2, 1}));
    EXPECT_EQ(in_qminus1_basis(QPoly::from_ints({0, -1, 0, 1})), rats({0, 2, 3, 1}));
}

TEST(QFieldProperties, FieldAxioms) {
    test_support::RandomInputs in(11);
    for (int i = 0; i < 60; ++i) {
        const RationalFunction a = in.rational_function();
        const RationalFunction b = in.rational_function();
        const RationalFunction c = in.rational_function();
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + b, b + a);
        EXPECT_TRUE((a - a).is_zero());
        if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), RationalFunction(1));
    }
}

TEST(QFieldProperties, AdamsAndBarAreHomomorphisms) {
    test_support::RandomInputs in(12);
    for (int i = 0; i < 60; ++i) {
        const RationalFunction a = in.rational_function();
        const RationalFunction b = in.rational_function();
        const std::size_t j = static_cast<std::size_t>(in.integer(1, 3));
        const std::size_t k = static_cast<std::size_t>(in.integer(1, 3));
        EXPECT_EQ((a * b).adams(k), a.adams(k) * b.adams(k));
        EXPECT_EQ((a + b).adams(k), a.adams(k) + b.adams(k));
        EXPECT_EQ(a.adams(k).adams(j), a.adams(j * k));
        EXPECT_EQ(a.bar().bar(), a);
        EXPECT_EQ((a * b).bar(), a.bar() * b.bar());
        EXPECT_EQ((a + b).bar(), a.bar() + b.bar());
    }
}

TEST(QFieldProperties, QMinus1BasisRoundTripAndTaylorAgreement) {
    test_support::RandomInputs in(13);
    for (int i = 0; i < 100; ++i) {
        const QPoly p = in.poly(8, 9);
        const auto c = in_qminus1_basis(p);
        EXPECT_EQ(from_qminus1_basis(c), p);
        if (p.is_zero()) continue;
        EXPECT_EQ(RationalFunction(p).taylor_at_one(c.size() - 1), c);
    }
}

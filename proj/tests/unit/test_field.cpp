#include <doctest.h>

#include "detk/field.hpp"

using namespace detk::rings;

TEST_CASE("prime field arithmetic, hand-checked over F_5") {
    auto F5 = CoeffField::prime(5);
    auto e = [&](std::int64_t n) { return F5.from_int(n); };
    CHECK(F5.add(e(3), e(4)) == e(2));
    CHECK(F5.mul(e(3), e(4)) == e(2));
    CHECK(F5.inv(e(2)) == e(3));
    CHECK(F5.neg(e(0)) == e(0));
    CHECK(F5.sub(e(1), e(3)) == e(3));
    CHECK(F5.div(e(4), e(3)) == e(3));  // 4 * 3^{-1} = 4 * 2 = 8 = 3
    CHECK(F5.is_zero(F5.add(e(2), e(3))));
}

TEST_CASE("prime field printing uses balanced representatives") {
    auto F5 = CoeffField::prime(5);
    CHECK(F5.to_string(F5.from_int(4)) == "-1");
    CHECK(F5.to_string(F5.from_int(2)) == "2");
    CHECK(F5.to_string(F5.from_int(0)) == "0");
}

TEST_CASE("characteristic 2 is allowed") {
    auto F2 = CoeffField::prime(2);
    CHECK(F2.add(F2.one(), F2.one()) == F2.zero());
}

TEST_CASE("field constructor rejects composite characteristic") {
    CHECK_THROWS_AS(CoeffField::prime(32001), detk::Error);  // 3 | 32001
    CHECK_NOTHROW(CoeffField::prime(32003));
    CHECK_THROWS_AS(CoeffField::prime(1), detk::Error);
}

TEST_CASE("primality test on boundary values") {
    CHECK(is_prime_u32(2));
    CHECK(is_prime_u32(32003));
    CHECK(is_prime_u32(2147483647));  // 2^31 - 1
    CHECK_FALSE(is_prime_u32(1));
    CHECK_FALSE(is_prime_u32(32001));
    CHECK_FALSE(is_prime_u32(3215031751u));  // strong pseudoprime to bases 2,3,5,7
}

TEST_CASE("rational arithmetic stays reduced") {
    auto Q = CoeffField::rationals();
    auto half = Q.from_fraction(1, 2);
    auto third = Q.from_fraction(2, 6);
    auto sum = Q.add(half, third);
    CHECK(sum == Q.from_fraction(5, 6));
    CHECK(Q.mul(half, Q.from_int(2)) == Q.one());
    CHECK(Q.from_fraction(-3, -6) == half);
    CHECK(Q.to_string(Q.from_fraction(5, -10)) == "-1/2");
    CHECK(Q.inv(Q.from_fraction(-2, 3)) == Q.from_fraction(-3, 2));
}

TEST_CASE("rational overflow throws instead of wrapping") {
    auto Q = CoeffField::rationals();
    auto big = Q.from_int(std::int64_t(1) << 40);
    CHECK_THROWS_AS(Q.mul(Q.mul(big, big), big), detk::Error);
    auto huge = Q.from_int((std::int64_t(1) << 62));
    CHECK_THROWS_AS(Q.add(huge, huge), detk::Error);
}

TEST_CASE("field axioms on pseudorandom rationals") {
    auto Q = CoeffField::rationals();
    // Small deterministic sweep; values chosen to exercise signs and reduction.
    for (int a = -6; a <= 6; ++a)
        for (int b = 1; b <= 4; ++b) {
            auto x = Q.from_fraction(a, b);
            auto y = Q.from_fraction(b - 2, 3);
            auto z = Q.from_fraction(-a - 1, b + 1);
            CHECK(Q.add(x, y) == Q.add(y, x));
            CHECK(Q.mul(x, Q.add(y, z)) == Q.add(Q.mul(x, y), Q.mul(x, z)));
            if (!Q.is_zero(x)) CHECK(Q.mul(x, Q.inv(x)) == Q.one());
        }
}

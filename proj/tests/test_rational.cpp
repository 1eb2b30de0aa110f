#include "doctest.h"

#include "emu/prng.hpp"
#include "emu/rational.hpp"

#include <cstdint>

using emu::BigInt;
using emu::Prng;
using emu::Rat;

TEST_CASE("bigint arithmetic agrees with int64 on small operands") {
    Prng rng(12345);
    for (int iter = 0; iter < 2000; ++iter) {
        std::int64_t a = rng.next_in(-1000000, 1000000);
        std::int64_t b = rng.next_in(-1000000, 1000000);
        BigInt A(a), B(b);
        CHECK((A + B).to_string() == std::to_string(a + b));
        CHECK((A - B).to_string() == std::to_string(a - b));
        CHECK((A * B).to_string() == std::to_string(a * b));
        if (b != 0) {
            BigInt q, r;
            BigInt::divmod(A, B, q, r);
            CHECK(q.to_string() == std::to_string(a / b));
            CHECK(r.to_string() == std::to_string(a % b));
        }
        CHECK(BigInt::cmp(A, B) == (a < b ? -1 : a > b ? 1 : 0));
    }
}

TEST_CASE("bigint survives multi-limb magnitudes") {
    // (2^96 + 7) * (2^64 + 3) recomputed via string round trip.
    BigInt p96 = BigInt::pow(BigInt(2), 96) + BigInt(7);
    BigInt p64 = BigInt::pow(BigInt(2), 64) + BigInt(3);
    BigInt prod = p96 * p64;
    BigInt q, r;
    BigInt::divmod(prod, p64, q, r);
    CHECK(q == p96);
    CHECK(r.is_zero());
    BigInt::divmod(prod + BigInt(5), p64, q, r);
    CHECK(q == p96);
    CHECK(r == BigInt(5));
    CHECK(BigInt::from_decimal(prod.to_string()) == prod);
}

TEST_CASE("bigint gcd") {
    CHECK(BigInt::gcd(BigInt(12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::gcd(BigInt(-12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::gcd(BigInt(0), BigInt(5)) == BigInt(5));
    BigInt big = BigInt::pow(BigInt(2), 100) * BigInt(9);
    CHECK(BigInt::gcd(big, BigInt::pow(BigInt(2), 50) * BigInt(6)) ==
          BigInt::pow(BigInt(2), 51) * BigInt(3));
}

TEST_CASE("rational field ops agree with fraction arithmetic") {
    Prng rng(777);
    auto rr = [&]() {
        std::int64_t n = rng.next_in(-40, 40);
        std::int64_t d = rng.next_in(1, 23);
        return Rat(n, d);
    };
    for (int iter = 0; iter < 1000; ++iter) {
        Rat a = rr(), b = rr();
        // (a+b)-b == a, (a*b)/b == a when b != 0
        CHECK((a + b) - b == a);
        CHECK((a - b) + b == a);
        if (!b.is_zero()) CHECK((a * b) / b == a);
        CHECK(Rat::cmp(a, b) == -Rat::cmp(b, a));
    }
}

TEST_CASE("rational normalization and parsing") {
    CHECK(Rat(6, 4) == Rat(3, 2));
    CHECK(Rat(-6, 4) == Rat(3, -2));
    CHECK(Rat(0, 17) == Rat(0));
    CHECK(Rat(6, 4).to_string() == "3/2");
    CHECK(Rat(8, 4).to_string() == "2");
    CHECK(Rat::parse("3/2") == Rat(3, 2));
    CHECK(Rat::parse("-3/2") == Rat(-3, 2));
    CHECK(Rat::parse("2.5") == Rat(5, 2));
    CHECK(Rat::parse("-0.25") == Rat(-1, 4));
    CHECK(Rat::parse("42") == Rat(42));
    CHECK_THROWS_AS(Rat::parse("1/0"), emu::input_error);
    CHECK_THROWS_AS(Rat::parse("abc"), emu::input_error);
}

TEST_CASE("rational ordering is exact on near ties") {
    Rat a(1000000007, 1000000008);
    Rat b(999999999, 1000000000);
    CHECK(a > b);
    CHECK(!(a == b));
    Rat big1 = Rat(BigInt::pow(BigInt(10), 40) + BigInt(1), BigInt::pow(BigInt(10), 40));
    Rat big2 = Rat(BigInt::pow(BigInt(10), 40), BigInt::pow(BigInt(10), 40) - BigInt(1));
    CHECK(big1 < big2);
}

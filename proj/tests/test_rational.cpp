#include "twoblock/rational.hpp"

#include <catch2/catch_amalgamated.hpp>

using twoblock::Rat;

TEST_CASE("rationals are always reduced with positive denominator") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(2, 4).num() == 1);
    CHECK(Rat(2, 4).den() == 2);
    CHECK(Rat(3, -6) == Rat(-1, 2));
    CHECK(Rat(3, -6).den() == 2);
    CHECK(Rat(-3, -6) == Rat(1, 2));
    CHECK(Rat(0, 7).den() == 1);
    CHECK_THROWS(Rat(1, 0));
}

TEST_CASE("rational arithmetic is exact") {
    Rat a(1, 3), b(1, 6);
    CHECK(a + b == Rat(1, 2));
    CHECK(a - b == Rat(1, 6));
    CHECK(a * b == Rat(1, 18));
    CHECK(a / b == Rat(2));
    CHECK(-a == Rat(-1, 3));
    CHECK(a.inverse() == Rat(3));
    CHECK_THROWS(a / Rat(0));
    CHECK_THROWS(Rat(0).inverse());

    // No drift over many operations.
    Rat s(0);
    for (int i = 1; i <= 100; ++i) s += Rat(1, i) * Rat(i, 1);
    CHECK(s == Rat(100));
}

TEST_CASE("rational ordering and signs") {
    CHECK(Rat(1, 3) < Rat(1, 2));
    CHECK(Rat(-5, 2) < Rat(0));
    CHECK(Rat(-1, 2).sign() == -1);
    CHECK(Rat(0).sign() == 0);
    CHECK(twoblock::abs(Rat(-7, 3)) == Rat(7, 3));
}

TEST_CASE("rational text round-trip") {
    for (const char* s : {"0", "1", "-1", "5/3", "-22/7", "123456789123456789/2"}) {
        CHECK(Rat::parse(s).str() == s);
    }
    CHECK(Rat::parse("4/6") == Rat(2, 3));  // parser canonicalizes
    CHECK_THROWS(Rat::parse(""));
    CHECK_THROWS(Rat::parse("1/0"));
    CHECK_THROWS(Rat::parse("abc"));
}

TEST_CASE("big values stay exact") {
    Rat big = Rat::parse("1");
    for (int i = 0; i < 40; ++i) big *= Rat(10);
    Rat expect = Rat(mpz_class("10000000000000000000000000000000000000000"));
    CHECK(big == expect);
    CHECK((big / expect).is_one());
}

#include "doctest.h"

#include "coverwalk/rational.hpp"

using namespace coverwalk;

TEST_SUITE("rational") {

TEST_CASE("parses fractions, integers and decimals") {
    CHECK(parse_rational("3/10") == Rational(3, 10));
    CHECK(parse_rational("-3/10") == Rational(-3, 10));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("0.375") == Rational(3, 8));
    CHECK(parse_rational("-1.25") == Rational(-5, 4));
    CHECK(parse_rational("2/4") == Rational(1, 2)); // reduced on construction
}

TEST_CASE("rejects scientific notation and malformed input") {
    CHECK_THROWS_AS(parse_rational("1e-3"), InputError);
    CHECK_THROWS_AS(parse_rational("2.5E2"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
    CHECK_THROWS_AS(parse_rational(""), InputError);
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), InputError);
}

TEST_CASE("formats in lowest terms") {
    CHECK(format_rational(Rational(1, 2)) == "1/2");
    CHECK(format_rational(Rational(4, 2)) == "2");
    CHECK(format_rational(Rational(-3, 4)) == "-3/4");
    CHECK(format_rational(Rational(0)) == "0");
}

TEST_CASE("format and parse are inverse on a sweep") {
    for (int p = -12; p <= 12; ++p)
        for (int q = 1; q <= 9; ++q) {
            Rational r(p, q);
            CHECK(parse_rational(format_rational(r)) == r);
        }
}

TEST_CASE("doubles convert exactly") {
    CHECK(rational_from_double(0.375) == Rational(3, 8));
    CHECK(rational_from_double(-2.0) == Rational(-2));
    CHECK(rational_from_double(0.1) != Rational(1, 10)); // binary 0.1 is not 1/10
    CHECK(to_double(rational_from_double(0.1)) == 0.1);  // but round-trips
}

} // TEST_SUITE

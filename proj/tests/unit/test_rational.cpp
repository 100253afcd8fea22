#include <doctest.h>

#include <btrack/errors.hpp>
#include <btrack/rational.hpp>

using btrack::Rational;

TEST_CASE("rationals are canonical") {
    Rational r(6, -4);
    CHECK(r.numerator() == -3);
    CHECK(r.denominator() == 2);
    CHECK(Rational(0, 5) == Rational(0));
    CHECK_THROWS_AS(Rational(1, 0), btrack::DivisionByZero);
}

TEST_CASE("parsing literals") {
    CHECK(Rational::from_string("3/4") == Rational(3, 4));
    CHECK(Rational::from_string("-3/4") == Rational(-3, 4));
    CHECK(Rational::from_string("1.25") == Rational(5, 4));
    CHECK(Rational::from_string(".5") == Rational(1, 2));
    CHECK(Rational::from_string("-2") == Rational(-2));
    CHECK_THROWS_AS(Rational::from_string("x"), btrack::NonNumericValue);
    CHECK_THROWS_AS(Rational::from_string("1/0"), btrack::DivisionByZero);
}

TEST_CASE("arithmetic and comparisons") {
    const Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(a > b);
    CHECK((-a).sign() == -1);
    CHECK_THROWS_AS(a / Rational(0), btrack::DivisionByZero);
    CHECK(Rational(2, 3).pow_int(-2) == Rational(9, 4));
    CHECK(Rational(-2).pow_int(3) == Rational(-8));
}

TEST_CASE("floors, rounding, decimals") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(7, 2).ceil() == 4);
    CHECK(Rational(1, 3).round_to_digits(3) == Rational(333, 1000));
    CHECK(Rational(2, 3).round_to_digits(3) == Rational(667, 1000));
    CHECK(Rational(-2, 3).round_to_digits(3) == Rational(-667, 1000));
    CHECK(Rational(1, 2).to_decimal(3) == "0.500");
    CHECK(Rational(-1, 8).to_decimal(2) == "-0.13");         // round half away
    CHECK(Rational(-1, 8).to_decimal(2, true) == "-0.13");   // truncation toward -inf
    CHECK(Rational(1414213, 1000000).to_decimal(6, true) == "1.414213");
    CHECK(Rational(5).to_decimal(0) == "5");
}

TEST_CASE("pow10") {
    CHECK(Rational::pow10(3) == Rational(1000));
    CHECK(Rational::pow10(-2) == Rational(1, 100));
}

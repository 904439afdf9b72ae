#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "novsym/rational.hpp"

using novsym::Rational;

TEST_CASE("construction and arithmetic") {
  Rational a(2, 3), b(-1, 6);
  CHECK((a + b).to_string() == "1/2");
  CHECK((a * b).to_string() == "-1/9");
  CHECK((a - a).is_zero());
  CHECK((a / b).to_string() == "-4");
  CHECK(Rational(4, -8).to_string() == "-1/2");
}

TEST_CASE("string round trips") {
  CHECK(Rational::from_string("7").to_string() == "7");
  CHECK(Rational::from_string("-3/4").to_string() == "-3/4");
  CHECK(Rational::from_string("0.25").to_string() == "1/4");
  CHECK(Rational::from_string("-1.5").to_string() == "-3/2");
  CHECK_THROWS_AS(Rational::from_string("1/0"), novsym::AlgebraError);
}

TEST_CASE("powers") {
  CHECK(Rational(2, 3).pow_int(3).to_string() == "8/27");
  CHECK(Rational(2, 3).pow_int(-2).to_string() == "9/4");
  CHECK(Rational(0).pow_int(0).is_one());

  auto r = Rational(4).pow_rational(Rational(1, 2));
  REQUIRE(r.has_value());
  CHECK(r->to_string() == "2");

  auto s = Rational(8, 27).pow_rational(Rational(-2, 3));
  REQUIRE(s.has_value());
  CHECK(s->to_string() == "9/4");

  CHECK_FALSE(Rational(3).pow_rational(Rational(1, 2)).has_value());
  CHECK_FALSE(Rational(-4).pow_rational(Rational(1, 2)).has_value());
  auto cube = Rational(-8).pow_rational(Rational(1, 3));
  REQUIRE(cube.has_value());
  CHECK(cube->to_string() == "-2");
}

TEST_CASE("comparisons and conversions") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(5).is_integer());
  CHECK(Rational(5).as_long() == 5);
  CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
  CHECK_THROWS_AS(Rational(1, 2).as_long(), novsym::AlgebraError);
}

TEST_CASE("scientific notation converts exactly") {
  CHECK(novsym::Rational::from_string("1e-3").to_string() == "1/1000");
  CHECK(novsym::Rational::from_string("-2.5e2").to_string() == "-250");
  CHECK(novsym::Rational::from_string("1.0000000000000001e-05").to_string() ==
        "10000000000000001/1000000000000000000000");
}

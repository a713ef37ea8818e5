#include <stdexcept>

#include "doctest.h"
#include "prbox/rational.hpp"

namespace prbox {
namespace {

TEST_CASE("construction normalizes sign and gcd") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(-1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(0, 5) == Rational(0));
  CHECK(Rational(6, 8).num() == 3);
  CHECK(Rational(6, 8).den() == 4);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("arithmetic") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::domain_error);
}

TEST_CASE("ordering") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(3, 4) > Rational(1, 4));
  CHECK(Rational(3, 4) <= Rational(3, 4));
  CHECK(Rational(3, 4) >= Rational(3, 4));
}

TEST_CASE("comparison survives products that overflow 64 bits") {
  // 2^62/(2^62-1) exceeds (2^62+1)/2^62 by 1/(2^62 (2^62-1)); the cross
  // products differ by exactly 1 and would wrap in int64 arithmetic.
  const Rational big_a(4611686018427387904LL, 4611686018427387903LL);
  const Rational big_b(4611686018427387905LL, 4611686018427387904LL);
  CHECK(big_b < big_a);
  CHECK_FALSE(big_a < big_b);
  CHECK(big_a != big_b);
}

TEST_CASE("conversions") {
  CHECK(Rational(3, 4).to_double() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(Rational(3, 4).to_string() == "3/4");
  CHECK(Rational(-1, 2).to_string() == "-1/2");
  CHECK(Rational(5).to_string() == "5");
  CHECK(Rational(0).to_string() == "0");
}

TEST_CASE("histogram-friendly exactness") {
  // 8 * 1/16 + 8 * 3/16 accumulates to exactly 2 with no drift.
  Rational sum(0);
  for (int i = 0; i < 8; ++i) sum += Rational(1, 16);
  for (int i = 0; i < 8; ++i) sum += Rational(3, 16);
  CHECK(sum == Rational(2));
}

}  // namespace
}  // namespace prbox

#include <doctest.h>

#include <cmath>
#include <random>

#include "chaoslab/bound_interval.hpp"
#include "chaoslab/rational.hpp"

using namespace chaoslab;

namespace {

bool encloses(const BoundInterval& x, const Rational& q) {
  return from_double(x.lo()) <= q && q <= from_double(x.hi());
}

}  // namespace

TEST_CASE("arithmetic on point intervals encloses the exact rational result") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-30, 30);
  for (int t = 0; t < 2000; ++t) {
    const double a = std::ldexp(mant(gen), expo(gen));
    double b = std::ldexp(mant(gen), expo(gen));
    if (b == 0.0) b = 1.0;
    const Rational qa = from_double(a), qb = from_double(b);
    const BoundInterval A(a), B(b);
    CHECK(encloses(A + B, qa + qb));
    CHECK(encloses(A - B, qa - qb));
    CHECK(encloses(A * B, qa * qb));
    CHECK(encloses(A / B, qa / qb));
    CHECK((A + B).width() <= std::ldexp(std::fabs(a + b), -51) + 1e-300);
  }
}

TEST_CASE("interval operations are inclusion monotone") {
  const BoundInterval x(-1.5, 2.0), y(0.25, 3.0);
  const BoundInterval p = x * y;
  for (double a : {-1.5, 0.0, 1.0, 2.0}) {
    for (double b : {0.25, 1.0, 3.0}) {
      CHECK(p.contains(a * b));
      CHECK((x + y).contains(a + b));
      CHECK((x / y).contains(a / b));
    }
  }
  CHECK(abs(x).lo() == 0.0);
  CHECK(abs(x).hi() == 2.0);
}

TEST_CASE("enclose and rounding helpers bracket rationals") {
  const Rational third(1, 3);
  const BoundInterval t = enclose(third);
  CHECK(encloses(t, third));
  CHECK(t.width() > 0.0);
  CHECK(t.width() < 1e-16);
  CHECK(from_double(round_down(third)) <= third);
  CHECK(from_double(round_up(third)) >= third);
  CHECK(enclose(Rational(3, 4)).is_point());
}

TEST_CASE("powers with real exponents stay outward") {
  const BoundInterval x(2.0);
  const BoundInterval r = pow(x, 0.5);
  CHECK(r.contains(std::sqrt(2.0)));
  CHECK(r.lo() * r.lo() <= 2.0);
  CHECK(r.hi() * r.hi() >= 2.0);
  CHECK(pow(BoundInterval(-1.0, 4.0), 0.5).lo() == 0.0);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK(to_string(Rational(3, 4)) == "3/4");
  CHECK(inverse_factorial(4) == Rational(1, 24));
}

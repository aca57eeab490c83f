#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "chaoslab/errors.hpp"
#include "chaoslab/interval_poly.hpp"
#include "chaoslab/metrics.hpp"
#include "oracle.hpp"

using namespace chaoslab;
using oracle::Real;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<Rational> ints(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

SeriesFn ones(double g) { return SeriesFn(CoeffSeq::constant(Rational(1)), g); }
SeriesFn zero(double g) { return SeriesFn(CoeffSeq::zero(), g); }

// Double-precision reference for polynomials in Taylor form.
double taylor_value(const std::vector<Rational>& p, double x) {
  double s = 0, term = 1;
  for (std::size_t n = 0; n < p.size(); ++n) {
    s += p[n].get_d() * term;
    term *= x / static_cast<double>(n + 1);
  }
  return s;
}

}  // namespace

TEST_CASE("rho_1 and rho_inf of e^x on [0, 1]") {
  const BoundInterval r1 = rho_p(ones(1.0), zero(1.0), {1.0, 1.0}, 1e-10);
  CHECK(oracle::inside(r1, exp(Real(1)) - 1));
  CHECK(r1.width() < 1e-9);
  const BoundInterval rinf = rho_p(ones(1.0), zero(1.0), LpSpec::sup(1.0), 1e-10);
  CHECK(oracle::inside(rinf, exp(Real(1))));
  CHECK(rinf.width() < 1e-9);
}

TEST_CASE("rho_2 of e^x has the closed form sqrt((e^2 - 1) / 2)") {
  const BoundInterval r = rho_p(ones(1.0), zero(1.0), {2.0, 1.0}, 1e-10);
  CHECK(oracle::inside(r, sqrt((exp(Real(2)) - 1) / 2)));
}

TEST_CASE("rho_p of a sign-changing polynomial matches the exact integral") {
  // f(x) = x - 1/2 on [0, 1]: int |f|^p = 2 (1/2)^{p+1} / (p+1).
  const SeriesFn f(CoeffSeq::finite({Rational(-1, 2), Rational(1)}), 1.0);
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.5}) {
    const Real exact = pow(2 * pow(Real(0.5), p + 1) / (p + 1), 1 / Real(p));
    const BoundInterval r = lp_norm(f, {p, 1.0}, 1e-10);
    CHECK_MESSAGE(oracle::inside(r, exact), "p=" << p);
    CHECK(r.width() <= 1e-10);
  }
  CHECK(oracle::inside(lp_norm(f, LpSpec::sup(1.0), 1e-10), Real(0.5)));
}

TEST_CASE("rho_p agrees with adaptive quadrature on periodic differences") {
  std::mt19937_64 gen(19);
  for (int t = 0; t < 30; ++t) {
    std::vector<Rational> p1(gen() % 4), q1(1 + gen() % 3), p2(gen() % 4), q2(1 + gen() % 3);
    for (auto* v : {&p1, &q1, &p2, &q2}) {
      for (auto& x : *v) x = static_cast<long>(gen() % 3) - 1;
    }
    const double g = (t % 3 == 0) ? 0.5 : (t % 3 == 1 ? 1.0 : 2.0);
    const double p = (t % 2 == 0) ? 1.0 : 2.5;
    const CoeffSeq a = CoeffSeq::periodic(p1, q1), b = CoeffSeq::periodic(p2, q2);
    // Truncate far enough that the tail is below double resolution.
    const auto da = a.prefix(60), db = b.prefix(60);
    std::vector<Rational> diff(60);
    for (std::size_t n = 0; n < 60; ++n) diff[n] = da[n] - db[n];
    const double reference = std::pow(
        oracle::integrate([&](double x) { return std::pow(std::fabs(taylor_value(diff, x)), p); }, 0.0, g), 1.0 / p);
    const BoundInterval r = rho_p(SeriesFn(a, g), SeriesFn(b, g), {p, g}, 1e-9);
    CHECK_MESSAGE(r.lo() - 1e-9 <= reference, "t=" << t);
    CHECK_MESSAGE(reference <= r.hi() + 1e-9, "t=" << t);
  }
}

TEST_CASE("rho_inf agrees with a dense grid maximum") {
  const SeriesFn f(CoeffSeq::periodic({}, ints({0, 1, 0, -1})), 5.0);  // sin
  const BoundInterval r = lp_norm(f, LpSpec::sup(5.0), 1e-10);
  CHECK(oracle::inside(r, Real(1)));
  const SeriesFn h(CoeffSeq::finite(ints({1, -3, 1})), 3.0);  // 1 - 3x + x^2/2, minimum -3.5 at x = 3
  CHECK(oracle::inside(lp_norm(h, LpSpec::sup(3.0), 1e-10), Real(3.5)));
}

TEST_CASE("interval polynomial norms") {
  const IntervalPoly P({BoundInterval(-1.0), BoundInterval(0.0), BoundInterval(1.0)});  // t^2 - 1
  const NormResult s = sup_abs(P, 2.0, 1e-12);
  CHECK(s.value.contains(3.0));
  const NormResult i = integral_abs_pow(P, 2.0, 1.0, 1e-12);
  CHECK(i.value.lo() <= 2.0 + 1e-12);  // int_0^2 |t^2 - 1| = 2
  CHECK(i.value.hi() >= 2.0 - 1e-12);
  CHECK(i.value.width() <= 1e-12);
  CHECK(IntervalPoly().is_zero());
  CHECK_THROWS_AS(integral_abs_pow(P, 2.0, 0.5, 1e-9), DomainError);
}

TEST_CASE("d_E and d_lambda on known sequences") {
  const CoeffSeq a = CoeffSeq::constant(Rational(1));
  // d_E(1, 0) = sum 1/(n+1)! = e - 1
  CHECK(oracle::inside(d_E(a, CoeffSeq::zero()), exp(Real(1)) - 1));
  CHECK(d_lambda(a, CoeffSeq::zero()).contains(2.0));
  CHECK(d_lambda(CoeffSeq::finite(ints({1})), CoeffSeq::zero()).contains(1.0));
  CHECK_THROWS_AS(d_lambda(CoeffSeq::constant(Rational(2)), a), DomainError);
  // Single disagreement at index 3 weighs 1/4!.
  const CoeffSeq b = CoeffSeq::periodic(ints({1, 1, 1, 0}), ints({1}));
  CHECK(oracle::inside(d_E(a, b), Real(1) / 24));
}

TEST_CASE("weighted product metric with factorial weights equals d_E") {
  std::mt19937_64 gen(23);
  for (int t = 0; t < 100; ++t) {
    std::vector<Rational> p1(gen() % 6), q1(1 + gen() % 4), p2(gen() % 6), q2(1 + gen() % 4);
    for (auto* v : {&p1, &q1, &p2, &q2}) {
      for (auto& x : *v) x = static_cast<long>(gen() % 2);
    }
    const CoeffSeq a = CoeffSeq::periodic(p1, q1), b = CoeffSeq::periodic(p2, q2);
    const BoundInterval w = weighted_product_metric(a, b, factorial_weights());
    const BoundInterval d = d_E(a, b);
    CHECK(w.overlaps(d));
    CHECK(w.width() < 1e-12);
    CHECK(d.width() < 1e-12);
  }
  CHECK_THROWS_AS(weighted_product_metric(CoeffSeq::zero(), CoeffSeq::zero(), {factorial_weights().weight, -1.0}),
                  DomainError);
}

TEST_CASE("Hoelder comparison on a monomial") {
  // f(x) = x on [0, 2]: ||x||_1 = 2, ||x||_inf = 2, factor 2^{1} -> 4.
  const SeriesFn f(CoeffSeq::finite(ints({0, 1})), 2.0);
  const auto [lhs, rhs] = holder_compare(f, 1.0, kInf, 1e-10);
  CHECK(lhs.contains(2.0));
  CHECK(rhs.contains(4.0));
  CHECK_THROWS_AS(holder_compare(f, 2.0, 1.0), DomainError);
}

TEST_CASE("metric arguments are validated") {
  CHECK_THROWS_AS(rho_p(ones(1.0), zero(2.0), {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(rho_p(ones(1.0), zero(1.0), {0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(rho_p(ones(1.0), zero(1.0), {1.0, 2.0}), DomainError);
  CHECK(parse_exponent("inf") == kInf);
  CHECK(parse_exponent("2.5") == 2.5);
  CHECK_THROWS(parse_exponent("0.9"));
  CHECK_THROWS(parse_exponent("x"));
  CHECK(gamma_root(4.0, 2.0).contains(2.0));
  CHECK(gamma_root(4.0, kInf).contains(1.0));
}

TEST_CASE("tolerance that cannot be met is reported") {
  CHECK_THROWS_AS(rho_p(ones(1.0), zero(1.0), {1.0, 1.0}, 1e-300), ToleranceUnreachable);
}

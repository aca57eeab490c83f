#include <doctest.h>

#include <cmath>
#include <limits>

#include "chaoslab/constructions.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/tailmath.hpp"
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

const Alphabet& binary() {
  static const Alphabet F(ints({0, 1}));
  return F;
}

}  // namespace

TEST_CASE("periodic approximation repeats a prefix") {
  const CoeffSeq f = CoeffSeq::periodic(ints({0, 1}), ints({0, 0, 1}));
  const PeriodicApprox r = periodic_approx_in_EF(f, binary(), {1.0, 1.0}, 0.1);
  // Minimal N with zeta_N(1) < 0.1 is 4 (zeta_3 = e - 5/2 ~ 0.218, zeta_4 ~ 0.0516).
  CHECK(r.N == 4);
  CHECK(r.g.shift(r.N + 1) == r.g);
  CHECK(r.g.prefix(r.N + 1) == f.prefix(r.N + 1));
  CHECK(r.distance.hi() < 0.1);
  CHECK_THROWS_AS(periodic_approx_in_EF(f, Alphabet(ints({1})), {1.0, 1.0}, 0.1), DomainError);
}

TEST_CASE("first index below a tail threshold") {
  for (double g : {0.5, 1.0, 2.0}) {
    for (double eps : {0.1, 1e-4, 1e-10}) {
      const unsigned N = first_index_below(g, BoundInterval(1.0), eps);
      CHECK(oracle::zeta(g, N) < eps);
      if (N > 1) CHECK(oracle::zeta(g, N - 1) >= eps);
    }
  }
  CHECK_THROWS_AS(first_index_below(1.0, BoundInterval(1.0), 0.0), DomainError);
  CHECK_THROWS_AS(first_index_below(3000.0, BoundInterval(1.0), 1e-300), InfeasibleTolerance);
}

TEST_CASE("word positions follow the enumeration order") {
  CHECK(word_position(binary(), ints({1, 1})) == 8);
  CHECK(word_position(binary(), ints({1, 1, 1})) == 31);
  CHECK(word_position(binary(), ints({0})) == 0);
  const CoeffSeq b = dense_orbit_point(binary());
  for (const auto& w : {ints({1, 0, 1}), ints({0, 0, 0, 0}), ints({1, 1, 0, 1, 0})}) {
    CHECK(b.shift(word_position(binary(), w)).prefix(w.size()) == w);
  }
  CHECK_THROWS_AS(word_position(binary(), ints({2})), DomainError);
}

TEST_CASE("orbit search finds a close shift of the enumeration") {
  const CoeffSeq target = CoeffSeq::periodic({}, ints({1, 1, 0}));
  const CoeffSeq b = dense_orbit_point(binary());
  const OrbitHit hit = orbit_search(b, target, binary(), {1.0, 1.0}, 0.05);
  CHECK(b.shift(hit.l).prefix(hit.N + 1) == target.prefix(hit.N + 1));
  CHECK(hit.distance.hi() < 0.05);
}

TEST_CASE("transitivity witness joins two neighbourhoods") {
  const CoeffSeq u = CoeffSeq::periodic(ints({1}), ints({0}));
  const CoeffSeq v = CoeffSeq::constant(Rational(1));
  const TransitivityWitness w = transitivity_witness(u, v, 0.01, 0.02, binary(), {2.0, 1.5});
  CHECK(w.distance_u.hi() < 0.01);
  CHECK(w.distance_v.hi() < 0.02);
  CHECK(w.h.in_EF(binary()));
  CHECK(w.n > 0);
}

TEST_CASE("Bernstein approximation of smooth samples") {
  auto line = [](double x) { return BoundInterval(x); };
  const BernsteinResult r = bernstein_approx(line, 1.0, 1.0, 1e-3);
  CHECK(r.degree == 1);
  CHECK(r.P.taylor() == ints({0, 1}));
  // e^x on [0, 1]: compare against the exponential on a fine grid.
  auto ex = [](double x) { return BoundInterval(std::nextafter(std::exp(x), 0.0), std::nextafter(std::exp(x), 10.0)); };
  const BernsteinResult e = bernstein_approx(ex, std::exp(1.0), 1.0, 0.1);
  CHECK(e.sup_error < 0.1);
  const SeriesFn P = e.P.as_function(1.0);
  for (double x = 0; x <= 1.0; x += 1.0 / 64) CHECK(std::fabs(evaluate(P, x).mid() - std::exp(x)) < 0.1);
}

TEST_CASE("two coefficient values") {
  CHECK(ensure_two_coeff_values(Polynomial(), 1.0) == Polynomial::constant(Rational(1, 4)));
  const Polynomial P(ints({3, 0, 1}));
  CHECK(ensure_two_coeff_values(P, 0.5) == P);
  CHECK(Polynomial(ints({0, 0})).is_zero());
  CHECK(P.coefficient_set() == Alphabet(ints({0, 3, 1})));
}

TEST_CASE("finite-alphabet approximation of a polynomial and a series") {
  const Polynomial P(ints({2, -1, 0, 1}));
  const EFApproximation r = ef_approximation(P, {1.0, 2.0}, 0.01);
  CHECK(r.member.in_EF(r.F));
  CHECK(r.distance.hi() < 0.01);
  const SeriesFn f(CoeffSeq::periodic({}, ints({1, -1})), 1.0);
  const EFApproximation s = ef_approximation(f, LpSpec::sup(1.0), 1e-3);
  CHECK(s.member.in_EF(s.F));
  CHECK(s.F.size() >= 2);
  CHECK(s.distance.hi() < 1e-3);
}

TEST_CASE("taylor truncation stays within eps") {
  const SeriesFn f(CoeffSeq::constant(Rational(1)), 1.0);
  const Polynomial P = taylor_truncation(f, 1e-6);
  CHECK(oracle::zeta(1.0, static_cast<unsigned>(P.degree() + 1)) < 1e-6);
}

TEST_CASE("filtration on explicit approximants") {
  const std::vector<Polynomial> Ps{Polynomial(), Polynomial(), Polynomial()};
  const auto F = filtration(Ps, {1.0, 1.0});
  REQUIRE(F.size() == 3);
  CHECK(F[0] == Alphabet({Rational(0), Rational(1, 4)}));
  CHECK(F[1] == Alphabet({Rational(0), Rational(1, 4), Rational(1, 8)}));
  CHECK(F[2] == Alphabet({Rational(0), Rational(1, 4), Rational(1, 8), Rational(1, 12)}));
  const auto steps = filtration(SeriesFn(CoeffSeq::constant(Rational(1)), 1.0), LpSpec::sup(1.0), 4);
  for (std::size_t n = 1; n <= steps.size(); ++n) {
    CHECK(steps[n - 1].distance.hi() < 1.0 / static_cast<double>(n));
    if (n > 1) CHECK(steps[n - 2].F.is_subset_of(steps[n - 1].F));
  }
}

TEST_CASE("periodic point near a polynomial") {
  const Polynomial P(ints({1, 2}));
  const PeriodicPoint r = periodic_point_in_cinf(P, {1.0, 1.0}, 0.1);
  CHECK(r.g.shift(r.period_length) == r.g);
  CHECK(r.distance.hi() < 0.05);
  CHECK(r.g.prefix(2) == ints({1, 2}));
  CHECK(periodic_point_in_cinf(Polynomial(ints({1})), {1.0, 1.0}, 0.5).period_length >= 1);
}

TEST_CASE("sensitivity witness for the zero function") {
  const SeriesFn f(CoeffSeq::zero(), 1.0);
  const SensitivityWitness w = sensitivity_witness(f, 1.0, 0.5);
  CHECK(w.n == 4);
  CHECK(w.c == Rational(5, 4));
  CHECK(w.close.hi() < 0.5);
  CHECK(w.close.hi() <= 0.315);
  CHECK(w.far.lo() > 1.0);
  // g = 1/4 + (5/4) x^4/4! + ... so g^(4) is (5/4) e^x, whose sup is (5/4) e.
  CHECK(oracle::inside(w.far, Real(5) / 4 * exp(Real(1))));
  const SensitivityWitness big = sensitivity_witness(f, 1e6, 0.5);
  CHECK(big.far.lo() > 1e6);
  CHECK_THROWS_AS(sensitivity_witness(f, 1.0, 0.5, std::nullopt, true), DomainError);
  CHECK_THROWS_AS(sensitivity_witness(f, 1.0, -0.5), DomainError);
}

TEST_CASE("sensitivity witness for a nonzero polynomial") {
  const SeriesFn f = Polynomial(ints({1, -2, 3})).as_function(2.0);
  for (double beta : {1.0, 100.0}) {
    const SensitivityWitness w = sensitivity_witness(f, beta, 0.01);
    CHECK(w.close.hi() < 0.01);
    CHECK(w.far.lo() > beta);
  }
}

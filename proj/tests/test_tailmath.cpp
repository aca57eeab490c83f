#include <doctest.h>

#include <cmath>

#include "chaoslab/errors.hpp"
#include "chaoslab/tailmath.hpp"
#include "oracle.hpp"

using namespace chaoslab;
using oracle::Real;

namespace {
const double kGammas[] = {0.25, 0.5, 1.0, 2.0, 5.0};
}

TEST_CASE("eta encloses the exponential tail") {
  CHECK(oracle::inside(eta(1), exp(Real(1)) - 1));
  CHECK(oracle::inside(eta(4), exp(Real(1)) - Real(8) / 3));
  for (unsigned k = 1; k <= 40; ++k) {
    const BoundInterval e = eta(k);
    CHECK_MESSAGE(oracle::inside(e, oracle::eta(k)), "k=" << k);
    CHECK(e.width() <= 1e-14 * e.hi());
  }
}

TEST_CASE("zeta, xi and alpha enclose their reference values") {
  for (double g : kGammas) {
    for (unsigned k = 1; k <= 40; ++k) {
      CHECK_MESSAGE(oracle::inside(zeta(g, k), oracle::zeta(g, k)), "gamma=" << g << " k=" << k);
      CHECK_MESSAGE(oracle::inside(xi(g, k), oracle::xi(g, k)), "gamma=" << g << " k=" << k);
    }
  }
  for (unsigned k = 1; k <= 40; ++k) CHECK(oracle::inside(alpha(k), oracle::alpha(k)));
}

TEST_CASE("zeta at gamma 1 coincides with eta") {
  for (unsigned k = 1; k <= 30; ++k) CHECK(zeta(1.0, k).overlaps(eta(k)));
}

TEST_CASE("xi_1 and xi_2 both equal 3 - e at gamma 1") {
  const Real target = 3 - exp(Real(1));
  const BoundInterval x1 = xi(1.0, 1), x2 = xi(1.0, 2);
  CHECK(oracle::inside(x1, target));
  CHECK(oracle::inside(x2, target));
  CHECK(x1.width() < 1e-12);
  CHECK(x2.width() < 1e-12);
  CHECK(x1.overlaps(x2));
}

TEST_CASE("small known tail values") {
  // zeta_1(2) = e^2 - 1, eta_3 = e - 5/2
  CHECK(oracle::inside(zeta(2.0, 1), exp(Real(2)) - 1));
  CHECK(oracle::inside(eta(3), exp(Real(1)) - Real(5) / 2));
}

TEST_CASE("threshold N_gamma follows its three defining conditions") {
  // Independent restatement with plain loops in high precision.
  auto reference = [](double gd) {
    const Real g(gd);
    unsigned n1 = 0;
    while (Real(n1 + 2) <= g) ++n1;
    unsigned k = 1;
    for (;; ++k) {
      if (Real(k + 2) <= g) continue;
      if (g / (k + 1) * (k + 2) / (k + 2 - g) < 1) break;
    }
    unsigned n3 = 0;
    while (Real(n3) <= 2 * g - 1) ++n3;
    return std::max({1U, n1, k - 1, n3});
  };
  for (double g : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 7.25, 10.0}) {
    CHECK_MESSAGE(compute_n_gamma(g) == reference(g), "gamma=" << g);
  }
  CHECK(compute_n_gamma(1.0) == 2);
  CHECK(compute_n_gamma(5.0) == 10);
}

TEST_CASE("xi is positive and nonincreasing from N_gamma on") {
  for (double g : kGammas) {
    const unsigned N = compute_n_gamma(g);
    for (unsigned k = N; k < N + 60; ++k) {
      CHECK(oracle::xi(g, k) > 0);
      CHECK(oracle::xi(g, k) >= oracle::xi(g, k + 1));
    }
  }
}

TEST_CASE("threshold M_gamma matches the separation argument") {
  for (double g : kGammas) {
    const unsigned N = compute_n_gamma(g);
    Real delta = -1;
    for (unsigned m = 0; m < N; ++m) {
      Real b = oracle::alpha(m + 1);
      if (g <= 1.0) b *= pow(Real(g), m + 1);
      if (delta < 0 || b < delta) delta = b;
    }
    CHECK(oracle::inside(separation_bound(g), delta));
    // Smallest M >= N with xi_{n+1} <= delta for every n >= M; xi decreases past N.
    unsigned M = N;
    while (oracle::xi(g, M + 1) > delta) ++M;
    for (unsigned n = 0; n < N; ++n) {
      if (oracle::xi(g, n + 1) > delta) M = std::max(M, n + 1);
    }
    CHECK_MESSAGE(compute_m_gamma(g) == M, "gamma=" << g);
    CHECK(compute_m_gamma(g) >= N);
  }
}

TEST_CASE("table agrees with the free functions") {
  for (double g : kGammas) {
    const auto t = shared_tails(g, 40);
    CHECK(t->n_gamma() == compute_n_gamma(g));
    for (unsigned k = 1; k <= 40; ++k) {
      CHECK(t->eta(k).overlaps(eta(k)));
      CHECK(t->zeta(k).overlaps(zeta(g, k)));
      CHECK(t->xi(k).overlaps(xi(g, k)));
      CHECK(t->alpha(k).overlaps(alpha(k)));
      CHECK(oracle::inside(t->term(k), pow(Real(g), k) / oracle::factorial(k)));
    }
    const unsigned k = t->first_zeta_below(BoundInterval(1.0), 1e-6);
    CHECK(k >= 1);
    CHECK(t->zeta(k).hi() < 1e-6);
    CHECK((k == 1 || t->zeta(k - 1).hi() >= 1e-6));
  }
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(eta(0), DomainError);
  CHECK_THROWS_AS(zeta(0.0, 1), DomainError);
  CHECK_THROWS_AS(zeta(-1.0, 1), DomainError);
  CHECK_THROWS_AS(zeta(std::nan(""), 1), DomainError);
  CHECK_THROWS_AS(compute_n_gamma(0.0), DomainError);
}

#pragma once

// Independent high-precision reference values for the unit tests. Nothing
// here calls into the library except to convert its output.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "chaoslab/bound_interval.hpp"
#include "chaoslab/rational.hpp"

namespace oracle {

// ~330-bit binary float: every double converts exactly.
using Real = boost::multiprecision::cpp_bin_float_100;

inline Real from_rational(const chaoslab::Rational& q) {
  return Real(q.get_num().get_str()) / Real(q.get_den().get_str());
}

inline bool inside(const chaoslab::BoundInterval& x, const Real& v) {
  return Real(x.lo()) <= v && v <= Real(x.hi());
}

inline Real factorial(unsigned n) {
  Real f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

// sum_{i>=k} g^i / i!, summed directly until the terms drop below 2^-400 of
// the partial sum (well past the working precision).
inline Real exp_tail(const Real& g, unsigned k) {
  Real term = pow(g, k) / factorial(k), sum = 0;
  for (unsigned i = k; term > sum * Real(1e-120) || i < k + 2 * static_cast<unsigned>(g.convert_to<double>()) + 2;
       ++i) {
    sum += term;
    term = term * g / (i + 1);
  }
  return sum;
}

inline Real eta(unsigned k) { return exp_tail(Real(1), k); }
inline Real zeta(double g, unsigned k) { return exp_tail(Real(g), k); }
inline Real xi(double g, unsigned k) { return pow(Real(g), k) / factorial(k) - zeta(g, k + 1); }
inline Real alpha(unsigned k) { return 1 / factorial(k) - eta(k + 1); }

// Adaptive Gauss-Kronrod in double precision, used as an independent check of
// the certified integrals.
template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

}  // namespace oracle

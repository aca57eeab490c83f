#pragma once

#include <cstddef>
#include <vector>

#include "chaoslab/bound_interval.hpp"

namespace chaoslab {

// Polynomial sum c_k t^k with interval coefficients, used for certified
// norms of truncated series on [0, length].
class IntervalPoly {
 public:
  IntervalPoly() = default;
  explicit IntervalPoly(std::vector<BoundInterval> monomial) : c_(std::move(monomial)) {}

  const std::vector<BoundInterval>& coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }
  bool is_zero() const;

  BoundInterval operator()(double t) const;
  BoundInterval operator()(const BoundInterval& t) const;

  // Coefficients of P(m + s) in powers of s.
  std::vector<BoundInterval> taylor_at(double m) const;

 private:
  std::vector<BoundInterval> c_;
};

struct NormResult {
  BoundInterval value;
  std::size_t panels = 0;
};

// Enclosure of sup_{t in [0, length]} |P(t)| with width <= budget, found by
// branch and bound on midpoint Taylor forms. Throws ToleranceUnreachable
// when the panel limit is hit first.
NormResult sup_abs(const IntervalPoly& P, double length, double budget);

// Enclosure of int_0^length |P(t)|^p dt (p >= 1) with width <= budget.
NormResult integral_abs_pow(const IntervalPoly& P, double length, double p, double budget);

}  // namespace chaoslab

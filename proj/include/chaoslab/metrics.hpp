#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "chaoslab/bound_interval.hpp"
#include "chaoslab/coeffspace.hpp"

namespace chaoslab {

// L^p on [0, gamma]; p may be +infinity.
struct LpSpec {
  double p = 1.0;
  double gamma = 1.0;

  static LpSpec sup(double gamma) { return {std::numeric_limits<double>::infinity(), gamma}; }
  bool is_sup() const { return p == std::numeric_limits<double>::infinity(); }
  // Throws DomainError unless p >= 1 and gamma > 0.
  void validate() const;
};

// Accepts a number >= 1 or "inf".
double parse_exponent(const std::string& text);
std::string exponent_to_string(double p);

// gamma^{1/p}, with gamma^{1/inf} = 1.
BoundInterval gamma_root(double gamma, double p);

// sum |x_i - y_i| / 2^i over {0,1}-sequences; DomainError otherwise.
BoundInterval d_lambda(const CoeffSeq& x, const CoeffSeq& y);

// sum |a_n - b_n| / (n+1)!
BoundInterval d_E(const CoeffSeq& f, const CoeffSeq& g);

struct CoordinateWeights {
  std::function<BoundInterval(std::size_t)> weight;
  // Uniform bound on weight(i); the series converges because of it.
  double sup_bound = 1.0;
};

// sum weight(i) |x_i - y_i| / 2^i. DomainError when sup_bound is not a finite
// positive number or a weight exceeds it.
BoundInterval weighted_product_metric(const CoeffSeq& x, const CoeffSeq& y,
                                      const CoordinateWeights& weights);

// Weights 2^i/(i+1)! that turn the product metric into d_E.
CoordinateWeights factorial_weights();

// ||f - g||_p over the common domain, enclosure width <= tol. f and g must
// share gamma and origin, and gamma must match spec.gamma.
BoundInterval rho_p(const SeriesFn& f, const SeriesFn& g, const LpSpec& spec, double tol = 1e-9);

BoundInterval lp_norm(const SeriesFn& f, const LpSpec& spec, double tol = 1e-9);

// (||f||_p, gamma^{1/p - 1/q} ||f||_q) for 1 <= p < q <= inf.
std::pair<BoundInterval, BoundInterval> holder_compare(const SeriesFn& f, double p, double q,
                                                       double tol = 1e-9);

}  // namespace chaoslab

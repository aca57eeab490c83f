#include "chaoslab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "chaoslab/errors.hpp"
#include "chaoslab/interval_poly.hpp"
#include "chaoslab/tailmath.hpp"

namespace chaoslab {
namespace {

constexpr std::size_t kMaxTruncation = 4000;

// Exponent enclosure of 1/p.
BoundInterval reciprocal(double p) { return BoundInterval(1.0) / BoundInterval(p); }

// gamma^e for an interval exponent e >= 0.
BoundInterval gamma_power(double gamma, const BoundInterval& e) {
  if (gamma == 1.0 || e.hi() == 0.0) return BoundInterval(1.0);
  auto at = [gamma](double x) { return x == 0.0 ? BoundInterval(1.0) : pow(BoundInterval(gamma), x); };
  return BoundInterval::hull(at(e.lo()), at(e.hi()));
}

// I^{1/p} for I >= 0.
BoundInterval pth_root(const BoundInterval& I, double p) {
  const BoundInterval e = reciprocal(p);
  return BoundInterval::hull(pow(I, e.lo()), pow(I, e.hi()));
}

// Enclosure of sum_{n>=0} w(n) |x_n - y_n|, given an upper bound on the
// weight mass past an index. Terms are summed exactly until the tail is
// below 2^-60 of the partial sum (or the difference vanishes).
template <class Weight, class TailMass>
BoundInterval weighted_l1(const CoeffSeq& x, const CoeffSeq& y, Weight weight, TailMass tail_mass) {
  if (same_sequence(x, y)) return BoundInterval(0.0);
  BoundInterval partial(0.0);
  for (std::size_t K = 0;; ++K) {
    const Rational d = abs(Rational(x.coeff(K) - y.coeff(K)));
    if (sgn(d) != 0) partial += enclose(d) * weight(K);
    if (K % 8 != 7 && K + 1 < kMaxTruncation) continue;
    const Rational sup_tail = sup_abs_difference(x, y, K + 1);
    if (sgn(sup_tail) == 0) return partial;
    const BoundInterval tail = enclose(sup_tail) * tail_mass(K + 1);
    if (tail.hi() <= std::ldexp(partial.lo(), -60) || K + 1 >= kMaxTruncation) {
      return partial + BoundInterval(0.0, tail.hi());
    }
  }
}

// The truncated difference as a polynomial in t = x - origin, plus the sup
// of the neglected coefficients.
struct Truncation {
  IntervalPoly poly;
  Rational tail_sup;
  BoundInterval tail_bound;  // pointwise bound on the neglected series
};

Truncation truncate_difference(const CoeffSeq& a, const CoeffSeq& b, double gamma, double limit) {
  auto tails = shared_tails(gamma);
  Truncation tr;
  std::size_t K = 0;
  for (;; ++K) {
    tr.tail_sup = sup_abs_difference(a, b, K + 1);
    if (sgn(tr.tail_sup) == 0) break;
    if (K + 1 > tails->k_max()) tails = shared_tails(gamma, 2 * tails->k_max());
    tr.tail_bound = enclose(tr.tail_sup) * tails->zeta(static_cast<unsigned>(K + 1));
    if (tr.tail_bound.hi() < limit) break;
    if (K >= kMaxTruncation) throw ToleranceUnreachable("truncation index exceeds the supported range");
  }
  std::vector<BoundInterval> c;
  c.reserve(K + 1);
  for (std::size_t n = 0; n <= K; ++n) {
    const Rational d = a.coeff(n) - b.coeff(n);
    c.push_back(sgn(d) == 0 ? BoundInterval(0.0)
                            : enclose(Rational(d * inverse_factorial(static_cast<unsigned>(n)))));
  }
  while (!c.empty() && c.back() == BoundInterval(0.0)) c.pop_back();
  tr.poly = IntervalPoly(std::move(c));
  if (sgn(tr.tail_sup) == 0) tr.tail_bound = BoundInterval(0.0);
  return tr;
}

}  // namespace

void LpSpec::validate() const {
  if (!(p >= 1.0)) throw DomainError("L^p exponent must satisfy p >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive and finite");
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double p = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !(p >= 1.0)) {
    throw ConfigError("exponent must be a number >= 1 or 'inf', got '" + text + "'");
  }
  return p;
}

std::string exponent_to_string(double p) {
  if (std::isinf(p)) return "inf";
  std::string s = std::to_string(p);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

BoundInterval gamma_root(double gamma, double p) {
  if (std::isinf(p)) return BoundInterval(1.0);
  return gamma_power(gamma, reciprocal(p));
}

BoundInterval d_lambda(const CoeffSeq& x, const CoeffSeq& y) {
  if (!x.is_binary() || !y.is_binary()) throw DomainError("d_lambda needs {0,1} coefficients");
  return weighted_l1(
      x, y, [](std::size_t i) { return BoundInterval(std::ldexp(1.0, -static_cast<int>(i))); },
      [](std::size_t k) { return BoundInterval(std::ldexp(1.0, 1 - static_cast<int>(k))); });
}

BoundInterval d_E(const CoeffSeq& f, const CoeffSeq& g) {
  return weighted_l1(
      f, g, [](std::size_t n) { return enclose(inverse_factorial(static_cast<unsigned>(n + 1))); },
      [](std::size_t k) { return eta(static_cast<unsigned>(k + 1)); });
}

BoundInterval weighted_product_metric(const CoeffSeq& x, const CoeffSeq& y,
                                      const CoordinateWeights& weights) {
  const double W = weights.sup_bound;
  if (!(W > 0.0) || !std::isfinite(W) || !weights.weight) {
    throw DomainError("weighted_product_metric: weights need a finite positive uniform bound");
  }
  return weighted_l1(
      x, y,
      [&](std::size_t i) {
        const BoundInterval w = weights.weight(i);
        if (w.lo() < 0.0 || w.hi() > W) {
          throw DomainError("weighted_product_metric: weight " + std::to_string(i) +
                            " violates the uniform bound");
        }
        return w * BoundInterval(std::ldexp(1.0, -static_cast<int>(i)));
      },
      [W](std::size_t k) { return BoundInterval(W) * BoundInterval(std::ldexp(1.0, 1 - static_cast<int>(k))); });
}

CoordinateWeights factorial_weights() {
  return {[](std::size_t i) {
            Rational w = inverse_factorial(static_cast<unsigned>(i + 1));
            mpz_mul_2exp(w.get_num_mpz_t(), w.get_num_mpz_t(), i);
            w.canonicalize();
            return enclose(w);
          },
          1.0};
}

BoundInterval rho_p(const SeriesFn& f, const SeriesFn& g, const LpSpec& spec, double tol) {
  spec.validate();
  if (!(tol > 0.0)) throw DomainError("rho_p: tol must be positive");
  if (f.gamma() != g.gamma() || f.origin() != g.origin()) {
    throw DomainError("rho_p: functions must share their domain");
  }
  if (f.gamma() != spec.gamma) throw DomainError("rho_p: spec gamma differs from the functions' domain");
  const double gamma = spec.gamma;
  const BoundInterval root = gamma_root(gamma, spec.p);

  // Pointwise tail bound T costs at most gamma^{1/p} T on each side.
  const Truncation tr = truncate_difference(f.coeffs(), g.coeffs(), gamma, tol / (8.0 * root.hi()));
  const BoundInterval tail = root * tr.tail_bound;

  BoundInterval norm;
  if (tr.poly.is_zero()) {
    norm = BoundInterval(0.0);
  } else if (spec.is_sup()) {
    norm = sup_abs(tr.poly, gamma, tol / 4).value;
  } else {
    // The p-th root flattens large integrals, so size the integral budget from
    // a coarse pass: width(I^{1/p}) <= width(I) I_lo^{1/p - 1} / p.
    double budget = tol / 4;
    if (spec.p != 1.0) {
      const double sup = sup_abs(tr.poly, gamma, std::numeric_limits<double>::max()).value.hi();
      const double coarse_budget = 1e-3 * (BoundInterval(gamma) * pow(BoundInterval(sup), spec.p)).hi() + tol;
      const BoundInterval coarse = integral_abs_pow(tr.poly, gamma, spec.p, coarse_budget).value;
      if (coarse.lo() > 0.0) {
        budget = std::max(budget, (BoundInterval(tol / 4 * spec.p) * pow(BoundInterval(coarse.lo()), 1.0 - 1.0 / spec.p)).lo());
      }
    }
    for (int attempt = 0;; ++attempt) {
      const BoundInterval integral = integral_abs_pow(tr.poly, gamma, spec.p, budget).value;
      norm = spec.p == 1.0 ? integral : pth_root(integral, spec.p);
      if (norm.width() <= tol / 2) break;
      if (attempt == 12) throw ToleranceUnreachable("rho_p: integral enclosure too wide");
      budget /= 16;
    }
  }
  const BoundInterval rho = norm + BoundInterval(-tail.hi(), tail.hi());
  const BoundInterval out(std::max(rho.lo(), 0.0), std::max(rho.hi(), 0.0));
  if (out.width() > tol) throw ToleranceUnreachable("rho_p: enclosure wider than tol");
  return out;
}

BoundInterval lp_norm(const SeriesFn& f, const LpSpec& spec, double tol) {
  return rho_p(f, SeriesFn(CoeffSeq::zero(), f.gamma(), f.origin()), spec, tol);
}

std::pair<BoundInterval, BoundInterval> holder_compare(const SeriesFn& f, double p, double q, double tol) {
  if (!(p >= 1.0) || !(p < q)) throw DomainError("holder_compare: need 1 <= p < q <= inf");
  const BoundInterval lhs = lp_norm(f, {p, f.gamma()}, tol);
  const BoundInterval exponent =
      std::isinf(q) ? reciprocal(p) : reciprocal(p) - reciprocal(q);
  const BoundInterval e(std::max(exponent.lo(), 0.0), std::max(exponent.hi(), 0.0));
  const BoundInterval rhs = gamma_power(f.gamma(), e) * lp_norm(f, {q, f.gamma()}, tol);
  return {lhs, rhs};
}

}  // namespace chaoslab

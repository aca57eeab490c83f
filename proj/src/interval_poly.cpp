#include "chaoslab/interval_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "chaoslab/errors.hpp"

namespace chaoslab {
namespace {

constexpr std::size_t kMaxPanels = 400000;
constexpr std::size_t kSeriesOrder = 11;  // Taylor order for |P|^p on a panel

// Powers x^0..x^n of a non-negative interval.
std::vector<BoundInterval> powers(const BoundInterval& x, std::size_t n) {
  std::vector<BoundInterval> out(n + 1, BoundInterval(1.0));
  for (std::size_t k = 1; k <= n; ++k) out[k] = out[k - 1] * x;
  return out;
}

// A panel [a, b] expanded about a midpoint m; hl = m - a and hr = b - m.
struct Panel {
  double a = 0.0, b = 0.0, m = 0.0;
  BoundInterval hl, hr;
  double h = 0.0;  // upper bound on max(hl, hr)
  std::vector<BoundInterval> c;  // P(m + s) = sum c_k s^k
};

Panel make_panel(const IntervalPoly& P, double a, double b) {
  Panel pan;
  pan.a = a;
  pan.b = b;
  pan.m = a + (b - a) / 2;
  if (!(pan.m >= a && pan.m <= b)) pan.m = a;
  pan.hl = sub(pan.m, a);
  pan.hr = sub(b, pan.m);
  pan.h = std::max(pan.hl.hi(), pan.hr.hi());
  pan.c = P.taylor_at(pan.m);
  return pan;
}

// Range enclosure of sum_{k>=j} C(k, j) c_k s^{k-j} over |s| <= h.
BoundInterval derivative_range(const std::vector<BoundInterval>& c, std::size_t j, double h) {
  if (j >= c.size()) return BoundInterval(0.0);
  const BoundInterval H(h);
  BoundInterval spread(0.0);
  BoundInterval hp(1.0);
  BoundInterval binom(1.0);
  for (std::size_t k = j + 1; k < c.size(); ++k) {
    hp *= H;
    binom = binom * BoundInterval(static_cast<double>(k)) / BoundInterval(static_cast<double>(k - j));
    spread += binom * abs(c[k]) * hp;
  }
  return c[j] + BoundInterval(-spread.hi(), spread.hi());
}

// int_{-hl}^{hr} s^k ds for k = 0..n.
std::vector<BoundInterval> monomial_integrals(const Panel& pan, std::size_t n) {
  const auto r = powers(pan.hr, n + 1);
  const auto l = powers(pan.hl, n + 1);
  std::vector<BoundInterval> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const BoundInterval left = (k % 2 == 0) ? l[k + 1] : -l[k + 1];
    out[k] = (r[k + 1] + left) / BoundInterval(static_cast<double>(k + 1));
  }
  return out;
}

BoundInterval signed_integral(const Panel& pan) {
  const auto mono = monomial_integrals(pan, pan.c.empty() ? 0 : pan.c.size() - 1);
  BoundInterval s(0.0);
  for (std::size_t k = 0; k < pan.c.size(); ++k) s += pan.c[k] * mono[k];
  return s;
}

// int |P|^p over a panel on which P has the certain sign `sign`.
BoundInterval definite_power_integral(const Panel& pan, double p, double sign) {
  const BoundInterval sg(sign);
  if (p == 1.0) return sg * signed_integral(pan);

  std::vector<BoundInterval> u(pan.c.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = sg * pan.c[k];

  // Coefficients of u^p from u u' = p u' w rewritten as a recurrence.
  auto power_series = [p](const std::vector<BoundInterval>& v, std::size_t order) {
    std::vector<BoundInterval> w(order + 1, BoundInterval(0.0));
    w[0] = pow(v[0], p);
    for (std::size_t k = 1; k <= order; ++k) {
      BoundInterval acc(0.0);
      for (std::size_t j = 1; j <= k && j < v.size(); ++j) {
        const double factor = (p + 1.0) * static_cast<double>(j) - static_cast<double>(k);
        acc += BoundInterval(factor) * v[j] * w[k - j];
      }
      w[k] = acc / (BoundInterval(static_cast<double>(k)) * v[0]);
    }
    return w;
  };

  const auto w = power_series(u, kSeriesOrder);
  const auto mono = monomial_integrals(pan, kSeriesOrder + 1);
  BoundInterval total(0.0);
  for (std::size_t k = 0; k <= kSeriesOrder; ++k) total += w[k] * mono[k];

  // Lagrange remainder: the same recurrence on derivative ranges over the
  // whole panel encloses the order-12 Taylor coefficient at every point.
  std::vector<BoundInterval> U(kSeriesOrder + 2);
  for (std::size_t j = 0; j < U.size(); ++j) U[j] = sg * derivative_range(pan.c, j, pan.h);
  if (!U[0].certainly_positive()) {
    return BoundInterval(0.0, std::numeric_limits<double>::infinity());
  }
  const auto W = power_series(U, kSeriesOrder + 1);
  total += W[kSeriesOrder + 1] * mono[kSeriesOrder + 1];
  // Beside a root the remainder divides by a nearly vanishing range, so keep
  // the plain bracket len * range^p as a second enclosure and intersect.
  const BoundInterval crude = (pan.hl + pan.hr) * pow(U[0], p);
  return BoundInterval(std::max({total.lo(), crude.lo(), 0.0}), std::max(std::min(total.hi(), crude.hi()), 0.0));
}

BoundInterval panel_power_integral(const Panel& pan, double p) {
  const BoundInterval range = derivative_range(pan.c, 0, pan.h);
  if (range.certainly_positive()) return definite_power_integral(pan, p, 1.0);
  if (range.certainly_negative()) return definite_power_integral(pan, p, -1.0);

  const BoundInterval len = pan.hl + pan.hr;
  const double upper = (len * pow(BoundInterval(range.mag()), p)).hi();
  // Jensen: int |P|^p >= len^{1-p} |int P|^p.
  const BoundInterval mean_part = abs(signed_integral(pan));
  double lower = mean_part.lo();
  if (p != 1.0) lower = (pow(mean_part, p) / pow(len, p - 1.0)).lo();
  return BoundInterval(std::min(std::max(lower, 0.0), upper), upper);
}

}  // namespace

bool IntervalPoly::is_zero() const {
  return std::all_of(c_.begin(), c_.end(),
                     [](const BoundInterval& x) { return x.is_point() && x.lo() == 0.0; });
}

BoundInterval IntervalPoly::operator()(double t) const { return (*this)(BoundInterval(t)); }

BoundInterval IntervalPoly::operator()(const BoundInterval& t) const {
  BoundInterval acc(0.0);
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
  return acc;
}

std::vector<BoundInterval> IntervalPoly::taylor_at(double m) const {
  std::vector<BoundInterval> b = c_;
  const BoundInterval M(m);
  const std::size_t n = b.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t j = n - 1; j-- > k;) b[j] += M * b[j + 1];
  }
  return b;
}

NormResult sup_abs(const IntervalPoly& P, double length, double budget) {
  if (!(length > 0.0) || !(budget > 0.0)) throw DomainError("sup_abs: length and budget must be positive");
  if (P.is_zero()) return {BoundInterval(0.0), 0};

  struct Node {
    double a, b, upper;
    bool operator<(const Node& o) const { return upper < o.upper; }
  };
  double lower = 0.0;
  auto probe = [&](double t) { lower = std::max(lower, abs(P(t)).lo()); };
  auto node = [&](double a, double b) {
    const Panel pan = make_panel(P, a, b);
    probe(pan.m);
    return Node{a, b, abs(derivative_range(pan.c, 0, pan.h)).hi()};
  };

  probe(0.0);
  probe(length);
  std::priority_queue<Node> queue;
  queue.push(node(0.0, length));
  std::size_t panels = 1;
  for (;;) {
    const Node top = queue.top();
    if (top.upper - lower <= budget) {
      return {BoundInterval(std::min(lower, top.upper), top.upper), panels};
    }
    const double mid = top.a + (top.b - top.a) / 2;
    if (panels >= kMaxPanels || !(mid > top.a && mid < top.b)) {
      throw ToleranceUnreachable("sup norm: enclosure cannot be narrowed to the requested width");
    }
    queue.pop();
    queue.push(node(top.a, mid));
    queue.push(node(mid, top.b));
    panels += 2;
  }
}

NormResult integral_abs_pow(const IntervalPoly& P, double length, double p, double budget) {
  if (!(length > 0.0) || !(budget > 0.0)) {
    throw DomainError("integral: length and budget must be positive");
  }
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("integral: exponent must be finite and >= 1");
  if (P.is_zero()) return {BoundInterval(0.0), 0};

  BoundInterval total(0.0);
  std::size_t panels = 0;
  // Depth-first, left to right, so the result is deterministic.
  std::vector<std::pair<double, double>> stack{{0.0, length}};
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    if (++panels > kMaxPanels) {
      throw ToleranceUnreachable("integral: enclosure cannot be narrowed to the requested width");
    }
    const Panel pan = make_panel(P, a, b);
    const BoundInterval piece = panel_power_integral(pan, p);
    const double allowance = budget * (b - a) / length;
    if (piece.width() <= allowance) {
      total += piece;
      continue;
    }
    if (!(pan.m > a && pan.m < b)) {
      throw ToleranceUnreachable("integral: panel too narrow to refine");
    }
    stack.emplace_back(pan.m, b);
    stack.emplace_back(a, pan.m);
  }
  return {total, panels};
}

}  // namespace chaoslab

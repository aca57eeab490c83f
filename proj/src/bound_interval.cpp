#include "chaoslab/bound_interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "chaoslab/errors.hpp"

namespace chaoslab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude FMA residuals may be inexact (gradual underflow);
// rounding is then done conservatively in both directions.
constexpr double kTiny = 0x1p-960;

// Exact error of a + b (Knuth TwoSum).
double two_sum_err(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

double sum_down(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return two_sum_err(a, b, s) < 0.0 ? next_down(s) : s;
}

double sum_up(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return two_sum_err(a, b, s) > 0.0 ? next_up(s) : s;
}

double prod_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  if (std::abs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

double prod_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  if (std::abs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

// Sign of the exact a/b - q.
int quot_residual_sign(double a, double b, double q) {
  const double r = std::fma(-q, b, a);
  if (r == 0.0) return 0;
  return ((r > 0.0) == (b > 0.0)) ? 1 : -1;
}

double quot_down(double a, double b) {
  if (a == 0.0) return 0.0;
  const double q = a / b;
  if (!std::isfinite(q)) return q;
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return next_down(q);
  return quot_residual_sign(a, b, q) < 0 ? next_down(q) : q;
}

double quot_up(double a, double b) {
  if (a == 0.0) return 0.0;
  const double q = a / b;
  if (!std::isfinite(q)) return q;
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return next_up(q);
  return quot_residual_sign(a, b, q) > 0 ? next_up(q) : q;
}

double sqrt_down(double x) {
  if (x <= 0.0) return 0.0;
  const double s = std::sqrt(x);
  if (x < kTiny) return next_down(s);
  return std::fma(-s, s, x) < 0.0 ? next_down(s) : s;
}

double sqrt_up(double x) {
  if (x <= 0.0) return 0.0;
  const double s = std::sqrt(x);
  if (x < kTiny) return next_up(s);
  return std::fma(-s, s, x) > 0.0 ? next_up(s) : s;
}

}  // namespace

double next_up(double x) { return std::nextafter(x, kInf); }
double next_down(double x) { return std::nextafter(x, -kInf); }

BoundInterval::BoundInterval(double point) : lo_(point), hi_(point) {
  if (std::isnan(point)) throw DomainError("BoundInterval: NaN endpoint");
}

BoundInterval::BoundInterval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw DomainError("BoundInterval: invalid endpoints");
  }
}

BoundInterval BoundInterval::hull(const BoundInterval& a, const BoundInterval& b) {
  return {std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_)};
}

BoundInterval BoundInterval::symmetric(double radius) {
  const double r = std::abs(radius);
  return {-r, r};
}

double BoundInterval::width() const { return sum_up(hi_, -lo_); }

double BoundInterval::mid() const {
  if (lo_ == -hi_) return 0.0;
  return lo_ + 0.5 * (hi_ - lo_);
}

double BoundInterval::mag() const { return std::max(std::abs(lo_), std::abs(hi_)); }

double BoundInterval::mig() const {
  if (lo_ <= 0.0 && hi_ >= 0.0) return 0.0;
  return std::min(std::abs(lo_), std::abs(hi_));
}

BoundInterval& BoundInterval::operator+=(const BoundInterval& o) { return *this = *this + o; }
BoundInterval& BoundInterval::operator-=(const BoundInterval& o) { return *this = *this - o; }
BoundInterval& BoundInterval::operator*=(const BoundInterval& o) { return *this = *this * o; }
BoundInterval& BoundInterval::operator/=(const BoundInterval& o) { return *this = *this / o; }

BoundInterval operator+(const BoundInterval& a, const BoundInterval& b) {
  return {sum_down(a.lo(), b.lo()), sum_up(a.hi(), b.hi())};
}

BoundInterval operator-(const BoundInterval& a, const BoundInterval& b) {
  return {sum_down(a.lo(), -b.hi()), sum_up(a.hi(), -b.lo())};
}

BoundInterval operator*(const BoundInterval& a, const BoundInterval& b) {
  const double l[4] = {prod_down(a.lo(), b.lo()), prod_down(a.lo(), b.hi()),
                       prod_down(a.hi(), b.lo()), prod_down(a.hi(), b.hi())};
  const double h[4] = {prod_up(a.lo(), b.lo()), prod_up(a.lo(), b.hi()),
                       prod_up(a.hi(), b.lo()), prod_up(a.hi(), b.hi())};
  return {*std::min_element(l, l + 4), *std::max_element(h, h + 4)};
}

BoundInterval operator/(const BoundInterval& a, const BoundInterval& b) {
  if (b.lo() <= 0.0 && b.hi() >= 0.0) {
    throw DomainError("BoundInterval: division by an interval containing zero");
  }
  const double l[4] = {quot_down(a.lo(), b.lo()), quot_down(a.lo(), b.hi()),
                       quot_down(a.hi(), b.lo()), quot_down(a.hi(), b.hi())};
  const double h[4] = {quot_up(a.lo(), b.lo()), quot_up(a.lo(), b.hi()),
                       quot_up(a.hi(), b.lo()), quot_up(a.hi(), b.hi())};
  return {*std::min_element(l, l + 4), *std::max_element(h, h + 4)};
}

BoundInterval abs(const BoundInterval& x) {
  if (x.lo() >= 0.0) return x;
  if (x.hi() <= 0.0) return -x;
  return {0.0, x.mag()};
}

BoundInterval max(const BoundInterval& a, const BoundInterval& b) {
  return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

BoundInterval sqr(const BoundInterval& x) {
  const BoundInterval m = abs(x);
  return {prod_down(m.lo(), m.lo()), prod_up(m.hi(), m.hi())};
}

BoundInterval sqrt(const BoundInterval& x) {
  if (x.hi() < 0.0) throw DomainError("BoundInterval: sqrt of a negative interval");
  return {sqrt_down(std::max(x.lo(), 0.0)), sqrt_up(x.hi())};
}

BoundInterval pow(const BoundInterval& x, unsigned n) {
  if (n == 0) return BoundInterval(1.0);
  auto point_pow = [n](double v) {
    BoundInterval base(v);
    BoundInterval acc(1.0);
    unsigned e = n;
    while (e > 0) {
      if (e & 1U) acc *= base;
      e >>= 1U;
      if (e > 0) base = sqr(base);
    }
    return acc;
  };
  if (n % 2 == 0) {
    const BoundInterval m = abs(x);
    return {point_pow(m.lo()).lo(), point_pow(m.hi()).hi()};
  }
  return {point_pow(x.lo()).lo(), point_pow(x.hi()).hi()};
}

BoundInterval pow(const BoundInterval& x, double p) {
  if (!(p > 0.0)) throw DomainError("BoundInterval: pow needs a positive exponent");
  if (p == std::floor(p) && p <= 1024.0) {
    return pow(BoundInterval(std::max(x.lo(), 0.0), std::max(x.hi(), 0.0)),
               static_cast<unsigned>(p));
  }
  const double lo = std::max(x.lo(), 0.0);
  const double hi = std::max(x.hi(), 0.0);
  double plo = lo == 0.0 ? 0.0 : next_down(next_down(std::pow(lo, p)));
  double phi = hi == 0.0 ? 0.0 : next_up(next_up(std::pow(hi, p)));
  return {std::max(plo, 0.0), phi};
}

BoundInterval add(double a, double b) { return {sum_down(a, b), sum_up(a, b)}; }
BoundInterval sub(double a, double b) { return {sum_down(a, -b), sum_up(a, -b)}; }
BoundInterval mul(double a, double b) { return BoundInterval(a) * BoundInterval(b); }
BoundInterval div(double a, double b) { return BoundInterval(a) / BoundInterval(b); }

std::ostream& operator<<(std::ostream& os, const BoundInterval& x) {
  const auto prec = os.precision(17);
  os << '[' << x.lo() << ", " << x.hi() << ']';
  os.precision(prec);
  return os;
}

}  // namespace chaoslab

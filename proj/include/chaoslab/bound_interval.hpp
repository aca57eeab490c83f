#pragma once

#include <iosfwd>

namespace chaoslab {

// Closed interval [lo, hi] of doubles certified to contain an exact real.
// Arithmetic rounds outward: an endpoint moves by one ulp only when the
// floating-point result was actually inexact.
class BoundInterval {
 public:
  BoundInterval() = default;
  explicit BoundInterval(double point);
  BoundInterval(double lo, double hi);

  static BoundInterval hull(const BoundInterval& a, const BoundInterval& b);
  // [-r, r]
  static BoundInterval symmetric(double radius);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const;  // rounded up
  double mid() const;
  // max |x| over the interval
  double mag() const;
  // min |x| over the interval
  double mig() const;

  bool is_point() const { return lo_ == hi_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const BoundInterval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool overlaps(const BoundInterval& other) const {
    return lo_ <= other.hi_ && other.lo_ <= hi_;
  }
  bool certainly_positive() const { return lo_ > 0.0; }
  bool certainly_negative() const { return hi_ < 0.0; }

  BoundInterval operator-() const { return {-hi_, -lo_}; }
  BoundInterval& operator+=(const BoundInterval& o);
  BoundInterval& operator-=(const BoundInterval& o);
  BoundInterval& operator*=(const BoundInterval& o);
  BoundInterval& operator/=(const BoundInterval& o);

  friend bool operator==(const BoundInterval&, const BoundInterval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

BoundInterval operator+(const BoundInterval& a, const BoundInterval& b);
BoundInterval operator-(const BoundInterval& a, const BoundInterval& b);
BoundInterval operator*(const BoundInterval& a, const BoundInterval& b);
// Throws DomainError when b contains zero.
BoundInterval operator/(const BoundInterval& a, const BoundInterval& b);

BoundInterval abs(const BoundInterval& x);
BoundInterval max(const BoundInterval& a, const BoundInterval& b);
BoundInterval sqr(const BoundInterval& x);
BoundInterval sqrt(const BoundInterval& x);
// x^p for x >= 0 (lo clamped at 0) and real p > 0. Non-integer exponents go
// through std::pow and carry a two-ulp allowance per endpoint.
BoundInterval pow(const BoundInterval& x, double p);
// x^n by repeated squaring, exact outward rounding.
BoundInterval pow(const BoundInterval& x, unsigned n);

// Outward-rounded sum / difference / product / quotient of two doubles.
BoundInterval add(double a, double b);
BoundInterval sub(double a, double b);
BoundInterval mul(double a, double b);
BoundInterval div(double a, double b);

double next_up(double x);
double next_down(double x);

std::ostream& operator<<(std::ostream& os, const BoundInterval& x);

}  // namespace chaoslab

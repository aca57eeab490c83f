#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "chaoslab/bound_interval.hpp"

namespace chaoslab {

using Rational = mpq_class;

// Canonical "p/q" form (q >= 1, lowest terms), e.g. "0/1", "-1/4".
std::string to_string(const Rational& q);

// Accepts "p/q", "p", and finite decimals such as "0.25" or "-1.5e-3".
// Throws ConfigError on anything else.
Rational parse_rational(std::string_view text);

// Exact value of a finite double.
Rational from_double(double x);

// Tightest double interval containing q.
BoundInterval enclose(const Rational& q);

double round_down(const Rational& q);
double round_up(const Rational& q);

Rational abs(const Rational& q);

// 1/n! as an exact rational.
Rational inverse_factorial(unsigned n);

}  // namespace chaoslab

#include "chaoslab/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "chaoslab/errors.hpp"

namespace chaoslab {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ConfigError("not an integer: '" + std::string(s) + "'");
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

Rational parse_decimal(std::string_view s) {
  mpz_class exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exp10 = parse_integer(s.substr(e + 1));
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto ip = s.substr(0, dot);
    const auto fp = s.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
        (ip.empty() && fp.empty())) {
      throw ConfigError("malformed decimal");
    }
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw ConfigError("malformed decimal");
    digits = std::string(s);
  }
  if (!exp10.fits_slong_p()) throw ConfigError("decimal exponent out of range");
  const long shift = exp10.get_si() - frac_len;
  if (shift > 4096 || shift < -4096) throw ConfigError("decimal exponent out of range");
  Rational q{mpz_class(digits, 10)};
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  if (shift >= 0) {
    q *= p10;
  } else {
    q /= p10;
  }
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ConfigError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const mpz_class num = parse_integer(text.substr(0, slash));
    const mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot represent a non-finite double as a rational");
  Rational q(x);
  q.canonicalize();
  return q;
}

double round_down(const Rational& q) {
  // mpq_get_d truncates toward zero and may overflow to infinity.
  const double d = q.get_d();
  if (std::isinf(d)) return d > 0 ? std::numeric_limits<double>::max() : d;
  if (Rational(d) == q) return d;
  return sgn(q) > 0 ? d : next_down(d);
}

double round_up(const Rational& q) {
  const double d = q.get_d();
  if (std::isinf(d)) return d > 0 ? d : std::numeric_limits<double>::lowest();
  if (Rational(d) == q) return d;
  return sgn(q) > 0 ? next_up(d) : d;
}

BoundInterval enclose(const Rational& q) { return {round_down(q), round_up(q)}; }

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

Rational inverse_factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(mpz_class(1), f);
}

}  // namespace chaoslab

#include "chaoslab/coeffspace.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "chaoslab/errors.hpp"
#include "chaoslab/tailmath.hpp"

namespace chaoslab {

std::string index_to_string(Index i) {
  if (i == 0) return "0";
  std::string s;
  while (i > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(i % 10)));
    i /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Index parse_index(std::string_view text) {
  if (text.empty()) throw ConfigError("empty index");
  Index v = 0;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ConfigError("index must be a non-negative integer");
    }
    const Index next = v * 10 + static_cast<unsigned>(c - '0');
    if (next / 10 != v) throw ConfigError("index overflows 128 bits");
    v = next;
  }
  return v;
}

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<Rational> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("alphabet must not be empty");
  for (auto& v : values_) v.canonicalize();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    for (std::size_t j = i + 1; j < values_.size(); ++j) {
      if (values_[i] == values_[j]) throw DomainError("alphabet has a repeated value");
    }
  }
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  diameter_ = *hi - *lo;
}

Alphabet Alphabet::distinct(const std::vector<Rational>& values) {
  std::vector<Rational> out;
  for (const auto& v : values) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return Alphabet(std::move(out));
}

Rational Alphabet::max_abs() const {
  Rational m = 0;
  for (const auto& v : values_) m = std::max(m, chaoslab::abs(v));
  return m;
}

std::optional<std::size_t> Alphabet::index_of(const Rational& v) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == v) return i;
  }
  return std::nullopt;
}

bool Alphabet::is_subset_of(const Alphabet& other) const {
  return std::all_of(values_.begin(), values_.end(),
                     [&](const Rational& v) { return other.contains(v); });
}

Alphabet Alphabet::merged_with(const Alphabet& other) const {
  std::vector<Rational> v = values_;
  v.insert(v.end(), other.values_.begin(), other.values_.end());
  return distinct(v);
}

std::string_view to_string(TailKind kind) {
  switch (kind) {
    case TailKind::FiniteSupport: return "finite";
    case TailKind::EventuallyPeriodic: return "periodic";
    case TailKind::WordEnumeration: return "enum";
  }
  return "?";
}

// ---------------------------------------------------------------- enumeration

namespace {

bool mul_overflows(Index a, Index b, Index& out) { return __builtin_mul_overflow(a, b, &out); }

}  // namespace

Index enumeration_block_start(std::size_t m, std::size_t len) {
  Index start = 0;
  Index power = 1;
  for (std::size_t j = 1; j < len; ++j) {
    Index block = 0;
    if (mul_overflows(power, m, power) || mul_overflows(power, j, block) ||
        __builtin_add_overflow(start, block, &start)) {
      throw DomainError("word enumeration position exceeds 128 bits");
    }
  }
  return start;
}

Rational enumeration_symbol(const Alphabet& alphabet, Index pos) {
  const std::size_t m = alphabet.size();
  if (m == 1) return alphabet[0];
  std::size_t len = 1;
  Index power = m;  // m^len
  for (;;) {
    Index block = 0;
    if (mul_overflows(power, len, block) || pos < block) break;
    pos -= block;
    ++len;
    if (mul_overflows(power, m, power)) break;  // pos < 2^128 <= next block
  }
  const Index word = pos / len;
  const std::size_t digit_from_left = static_cast<std::size_t>(pos % len);
  Index divisor = 1;
  for (std::size_t i = 0; i + 1 + digit_from_left < len; ++i) divisor *= m;
  return alphabet[static_cast<std::size_t>((word / divisor) % m)];
}

// ---------------------------------------------------------------- CoeffSeq

namespace {

void canonicalize_all(std::vector<Rational>& v) {
  for (auto& x : v) x.canonicalize();
}

void trim_trailing_zeros(std::vector<Rational>& v) {
  while (!v.empty() && sgn(v.back()) == 0) v.pop_back();
}

// Smallest d dividing period.size() with period[i] == period[i % d].
std::size_t minimal_period(const std::vector<Rational>& period) {
  const std::size_t q = period.size();
  for (std::size_t d = 1; d < q; ++d) {
    if (q % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < q && ok; ++i) ok = period[i] == period[i - d];
    if (ok) return d;
  }
  return q;
}

std::size_t lcm_capped(std::size_t a, std::size_t b, std::size_t cap) {
  const std::size_t g = std::gcd(a, b);
  const std::size_t l = a / g;
  if (l > cap / b) return cap + 1;
  return l * b;
}

}  // namespace

CoeffSeq CoeffSeq::finite(std::vector<Rational> coeffs) {
  canonicalize_all(coeffs);
  trim_trailing_zeros(coeffs);
  return CoeffSeq(Finite{std::move(coeffs)});
}

CoeffSeq CoeffSeq::periodic(std::vector<Rational> preamble, std::vector<Rational> period) {
  if (period.empty()) throw DomainError("periodic sequence needs a non-empty period");
  canonicalize_all(preamble);
  canonicalize_all(period);
  period.resize(minimal_period(period));
  while (!preamble.empty() && preamble.back() == period.back()) {
    preamble.pop_back();
    std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
  }
  // A zero tail is finite support; one representation per stream.
  if (period.size() == 1 && sgn(period[0]) == 0) return finite(std::move(preamble));
  return CoeffSeq(Periodic{std::move(preamble), std::move(period)});
}

CoeffSeq CoeffSeq::constant(const Rational& c) { return periodic({}, {c}); }

CoeffSeq CoeffSeq::zero() { return finite({}); }

CoeffSeq CoeffSeq::word_enumeration(Alphabet alphabet, Index offset) {
  return CoeffSeq(Words{std::move(alphabet), offset});
}

TailKind CoeffSeq::kind() const {
  switch (rep_.index()) {
    case 0: return TailKind::FiniteSupport;
    case 1: return TailKind::EventuallyPeriodic;
    default: return TailKind::WordEnumeration;
  }
}

const std::vector<Rational>& CoeffSeq::preamble() const {
  if (const auto* f = std::get_if<Finite>(&rep_)) return f->coeffs;
  if (const auto* p = std::get_if<Periodic>(&rep_)) return p->preamble;
  throw DomainError("word enumeration has no preamble");
}

const std::vector<Rational>& CoeffSeq::period() const {
  if (const auto* p = std::get_if<Periodic>(&rep_)) return p->period;
  throw DomainError("only eventually periodic sequences have a period");
}

const Alphabet& CoeffSeq::alphabet() const {
  if (const auto* w = std::get_if<Words>(&rep_)) return w->alphabet;
  throw DomainError("only word enumerations carry an alphabet");
}

Index CoeffSeq::offset() const {
  if (const auto* w = std::get_if<Words>(&rep_)) return w->offset;
  throw DomainError("only word enumerations carry an offset");
}

Rational CoeffSeq::coeff(Index n) const {
  if (const auto* f = std::get_if<Finite>(&rep_)) {
    return n < f->coeffs.size() ? f->coeffs[static_cast<std::size_t>(n)] : Rational(0);
  }
  if (const auto* p = std::get_if<Periodic>(&rep_)) {
    if (n < p->preamble.size()) return p->preamble[static_cast<std::size_t>(n)];
    return p->period[static_cast<std::size_t>((n - p->preamble.size()) % p->period.size())];
  }
  const auto& w = std::get<Words>(rep_);
  Index pos = 0;
  if (__builtin_add_overflow(w.offset, n, &pos)) {
    throw DomainError("word enumeration position exceeds 128 bits");
  }
  return enumeration_symbol(w.alphabet, pos);
}

std::vector<Rational> CoeffSeq::prefix(std::size_t length) const {
  std::vector<Rational> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back(coeff(i));
  return out;
}

CoeffSeq CoeffSeq::shift(Index steps) const {
  if (const auto* f = std::get_if<Finite>(&rep_)) {
    if (steps >= f->coeffs.size()) return zero();
    return finite({f->coeffs.begin() + static_cast<std::ptrdiff_t>(steps), f->coeffs.end()});
  }
  if (const auto* p = std::get_if<Periodic>(&rep_)) {
    if (steps <= p->preamble.size()) {
      return periodic({p->preamble.begin() + static_cast<std::ptrdiff_t>(steps), p->preamble.end()},
                      p->period);
    }
    const auto rot = static_cast<std::size_t>((steps - p->preamble.size()) % p->period.size());
    std::vector<Rational> period = p->period;
    std::rotate(period.begin(), period.begin() + static_cast<std::ptrdiff_t>(rot), period.end());
    return periodic({}, std::move(period));
  }
  const auto& w = std::get<Words>(rep_);
  Index off = 0;
  if (__builtin_add_overflow(w.offset, steps, &off)) {
    throw DomainError("word enumeration offset exceeds 128 bits");
  }
  return word_enumeration(w.alphabet, off);
}

std::vector<Rational> CoeffSeq::values_from(std::size_t from) const {
  std::vector<Rational> vals;
  auto add = [&vals](const Rational& v) {
    if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);
  };
  if (const auto* f = std::get_if<Finite>(&rep_)) {
    for (std::size_t i = from; i < f->coeffs.size(); ++i) add(f->coeffs[i]);
    add(Rational(0));
  } else if (const auto* p = std::get_if<Periodic>(&rep_)) {
    for (std::size_t i = from; i < p->preamble.size(); ++i) add(p->preamble[i]);
    for (const auto& v : p->period) add(v);
  } else {
    for (const auto& v : std::get<Words>(rep_).alphabet.values()) add(v);
  }
  return vals;
}

bool CoeffSeq::in_EF(const Alphabet& alphabet) const {
  if (const auto* w = std::get_if<Words>(&rep_)) return w->alphabet.is_subset_of(alphabet);
  const auto vals = values_from(0);
  return std::all_of(vals.begin(), vals.end(), [&](const Rational& v) { return alphabet.contains(v); });
}

bool CoeffSeq::is_binary() const { return in_EF(Alphabet({Rational(0), Rational(1)})); }

Rational CoeffSeq::sup_abs() const {
  Rational m = 0;
  for (const auto& v : values_from(0)) m = std::max(m, chaoslab::abs(v));
  return m;
}

bool operator==(const CoeffSeq& a, const CoeffSeq& b) { return a.rep_ == b.rep_; }

bool same_sequence(const CoeffSeq& a, const CoeffSeq& b) {
  auto as_periodic = [](const CoeffSeq& s) -> std::optional<CoeffSeq> {
    switch (s.kind()) {
      case TailKind::FiniteSupport: return CoeffSeq::periodic(s.preamble(), {Rational(0)});
      case TailKind::EventuallyPeriodic: return s;
      case TailKind::WordEnumeration:
        if (s.alphabet().size() == 1) return CoeffSeq::constant(s.alphabet()[0]);
        return std::nullopt;
    }
    return std::nullopt;
  };
  const auto pa = as_periodic(a);
  const auto pb = as_periodic(b);
  if (pa && pb) return *pa == *pb;
  if (pa || pb) return false;  // a word enumeration over >= 2 letters is never eventually periodic
  return a == b;
}

Rational sup_abs_difference(const CoeffSeq& a, const CoeffSeq& b, std::size_t from) {
  auto pair_bound = [&] {
    Rational m = 0;
    for (const auto& x : a.values_from(from)) {
      for (const auto& y : b.values_from(from)) m = std::max(m, chaoslab::abs(Rational(x - y)));
    }
    return m;
  };
  if (a.kind() == TailKind::WordEnumeration || b.kind() == TailKind::WordEnumeration) {
    return pair_bound();
  }
  auto period_len = [](const CoeffSeq& s) {
    return s.kind() == TailKind::EventuallyPeriodic ? s.period().size() : std::size_t{1};
  };
  constexpr std::size_t kCap = 65536;
  const std::size_t q = lcm_capped(period_len(a), period_len(b), kCap);
  if (q > kCap) return pair_bound();
  const std::size_t start = std::max({from, a.preamble().size(), b.preamble().size()});
  Rational m = 0;
  for (std::size_t n = from; n < start + q; ++n) {
    m = std::max(m, chaoslab::abs(Rational(a.coeff(n) - b.coeff(n))));
  }
  return m;
}

// ---------------------------------------------------------------- SeriesFn

SeriesFn::SeriesFn(CoeffSeq coeffs, double gamma, double origin)
    : coeffs_(std::move(coeffs)), gamma_(gamma), origin_(origin) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive and finite");
  if (!std::isfinite(origin)) throw DomainError("origin must be finite");
  coeff_bound_ = coeffs_.sup_abs();
}

SeriesFn differentiate(const SeriesFn& f, Index times) {
  return SeriesFn(f.coeffs().shift(times), f.gamma(), f.origin());
}

BoundInterval evaluate(const SeriesFn& f, double x, double tol) {
  if (!(tol > 0.0)) throw DomainError("evaluate: tol must be positive");
  if (!std::isfinite(x)) throw DomainError("evaluate: x must be finite");
  const BoundInterval t_raw = sub(x, f.origin());
  if (t_raw.hi() < 0.0 || t_raw.lo() > f.gamma()) {
    throw DomainError("evaluate: x lies outside [origin, origin + gamma]");
  }
  const BoundInterval t(std::max(t_raw.lo(), 0.0), std::min(t_raw.hi(), f.gamma()));

  auto tails = shared_tails(f.gamma());
  const CoeffSeq zero = CoeffSeq::zero();
  // Truncate after index K once sup_{n>K}|a_n| zeta_{K+1} < tol/4.
  std::size_t K = 0;
  Rational tail_sup;
  for (;; ++K) {
    tail_sup = sup_abs_difference(f.coeffs(), zero, K + 1);
    if (sgn(tail_sup) == 0) break;
    if (K + 1 > tails->k_max()) tails = shared_tails(f.gamma(), 2 * tails->k_max());
    if ((enclose(tail_sup) * tails->zeta(static_cast<unsigned>(K + 1))).hi() < tol / 4) break;
    if (K > 2000) throw ToleranceUnreachable("evaluate: truncation index exceeds 2000");
  }

  const auto a = f.coeffs().prefix(K + 1);
  BoundInterval acc = enclose(a[K]);
  for (std::size_t n = K; n-- > 0;) {
    acc = enclose(a[n]) + acc * t / BoundInterval(static_cast<double>(n + 1));
  }
  if (sgn(tail_sup) != 0) {
    const double r = (enclose(tail_sup) * tails->zeta(static_cast<unsigned>(K + 1))).hi();
    acc += BoundInterval::symmetric(r);
  }
  if (acc.width() > tol) throw ToleranceUnreachable("evaluate: enclosure wider than tol");
  return acc;
}

double derivative_sup_bound(const SeriesFn& f) {
  const Rational a = sup_abs_difference(f.coeffs(), CoeffSeq::zero(), 1);
  if (sgn(a) == 0) return 0.0;
  const auto tails = shared_tails(f.gamma());
  const BoundInterval e_gamma = BoundInterval(1.0) + tails->zeta(1);
  return (enclose(a) * e_gamma).hi();
}

}  // namespace chaoslab

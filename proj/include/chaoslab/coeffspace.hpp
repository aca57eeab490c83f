#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chaoslab/bound_interval.hpp"
#include "chaoslab/rational.hpp"

namespace chaoslab {

// Position in a coefficient stream. Word-enumeration offsets grow like
// N * |F|^N, so 64 bits are not enough for realistic prefix lengths.
using Index = unsigned __int128;

std::string index_to_string(Index i);
Index parse_index(std::string_view text);

// Finite, ordered set of rational coefficient values F = {c_0, ..., c_m}.
class Alphabet {
 public:
  // Throws DomainError when empty or when a value repeats.
  explicit Alphabet(std::vector<Rational> values);
  // Drops repeats, keeping first occurrences in order.
  static Alphabet distinct(const std::vector<Rational>& values);

  const std::vector<Rational>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  // max_{i,j} |c_i - c_j|
  const Rational& diameter() const { return diameter_; }
  Rational max_abs() const;

  bool contains(const Rational& v) const { return index_of(v).has_value(); }
  std::optional<std::size_t> index_of(const Rational& v) const;
  bool is_subset_of(const Alphabet& other) const;
  // This alphabet followed by the values of `other` not yet present.
  Alphabet merged_with(const Alphabet& other) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.values_ == b.values_; }

 private:
  std::vector<Rational> values_;
  Rational diameter_;
};

enum class TailKind { FiniteSupport, EventuallyPeriodic, WordEnumeration };

std::string_view to_string(TailKind kind);

// A Taylor coefficient stream (a_n)_{n>=0}, read as f(x) = sum a_n x^n / n!.
//
// FiniteSupport:      a_n = coeffs[n], zero past the end.
// EventuallyPeriodic: preamble, then period repeated forever. Stored with
//                     minimal period and minimal preamble, so == decides
//                     equality of streams of this kind. A zero period
//                     yields FiniteSupport instead.
// WordEnumeration:    a_n = b_{n+offset}, b the concatenation of all words over
//                     the alphabet ordered by length, then lexicographically
//                     in the alphabet's order.
class CoeffSeq {
 public:
  static CoeffSeq finite(std::vector<Rational> coeffs);
  static CoeffSeq periodic(std::vector<Rational> preamble, std::vector<Rational> period);
  static CoeffSeq constant(const Rational& c);
  static CoeffSeq zero();
  static CoeffSeq word_enumeration(Alphabet alphabet, Index offset = 0);

  TailKind kind() const;

  // FiniteSupport coefficients, or the preamble for EventuallyPeriodic.
  const std::vector<Rational>& preamble() const;
  // EventuallyPeriodic only.
  const std::vector<Rational>& period() const;
  // WordEnumeration only.
  const Alphabet& alphabet() const;
  Index offset() const;

  Rational coeff(Index n) const;
  std::vector<Rational> prefix(std::size_t length) const;

  // Drops the first `steps` coefficients; the tail kind is preserved.
  CoeffSeq shift(Index steps = 1) const;

  bool in_EF(const Alphabet& alphabet) const;
  // True when every coefficient lies in {0, 1}.
  bool is_binary() const;
  // Values that occur at some index >= from (a superset for WordEnumeration
  // is never needed: every letter recurs).
  std::vector<Rational> values_from(std::size_t from = 0) const;
  Rational sup_abs() const;

  friend bool operator==(const CoeffSeq& a, const CoeffSeq& b);

 private:
  struct Finite {
    std::vector<Rational> coeffs;
    bool operator==(const Finite&) const = default;
  };
  struct Periodic {
    std::vector<Rational> preamble;
    std::vector<Rational> period;
    bool operator==(const Periodic&) const = default;
  };
  struct Words {
    Alphabet alphabet;
    Index offset;
    bool operator==(const Words&) const = default;
  };

  explicit CoeffSeq(std::variant<Finite, Periodic, Words> rep) : rep_(std::move(rep)) {}

  std::variant<Finite, Periodic, Words> rep_;
};

inline Rational coeff(const CoeffSeq& s, Index n) { return s.coeff(n); }
inline CoeffSeq shift(const CoeffSeq& s, Index steps = 1) { return s.shift(steps); }

// Equality of the underlying streams, across tail kinds.
bool same_sequence(const CoeffSeq& a, const CoeffSeq& b);

// Upper bound on sup_{n >= from} |a_n - b_n|; exact unless a word enumeration
// is involved or the combined period exceeds 65536.
Rational sup_abs_difference(const CoeffSeq& a, const CoeffSeq& b, std::size_t from = 0);

// Symbol at position `pos` of the length-then-lexicographic enumeration.
Rational enumeration_symbol(const Alphabet& alphabet, Index pos);
// Position where the block of words of length `len` starts: sum_{j<len} j m^j.
Index enumeration_block_start(std::size_t alphabet_size, std::size_t len);

// f(x) = sum a_n (x - origin)^n / n! on [origin, origin + gamma].
class SeriesFn {
 public:
  SeriesFn(CoeffSeq coeffs, double gamma, double origin = 0.0);

  const CoeffSeq& coeffs() const { return coeffs_; }
  double gamma() const { return gamma_; }
  double origin() const { return origin_; }
  const Rational& coeff_bound() const { return coeff_bound_; }

  friend bool operator==(const SeriesFn& a, const SeriesFn& b) {
    return a.gamma_ == b.gamma_ && a.origin_ == b.origin_ && a.coeffs_ == b.coeffs_;
  }

 private:
  CoeffSeq coeffs_;
  double gamma_;
  double origin_;
  Rational coeff_bound_;
};

// d/dx, i.e. the coefficient shift.
SeriesFn differentiate(const SeriesFn& f, Index times = 1);

// Enclosure of f(x) with width <= tol. Throws DomainError outside
// [origin, origin + gamma], ToleranceUnreachable if tol cannot be met.
BoundInterval evaluate(const SeriesFn& f, double x, double tol = 1e-12);

// Certified upper bound on sup |f'| over the domain: sup_{n>=1}|a_n| e^gamma.
double derivative_sup_bound(const SeriesFn& f);

}  // namespace chaoslab

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "chaoslab/coeffspace.hpp"
#include "chaoslab/errors.hpp"
#include "oracle.hpp"

using namespace chaoslab;
using oracle::Real;

namespace {

std::vector<Rational> ints(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

// Naive stream of preamble ++ period ++ period ++ ...
Rational naive_coeff(const std::vector<Rational>& pre, const std::vector<Rational>& per, std::size_t n) {
  if (n < pre.size()) return pre[n];
  return per[(n - pre.size()) % per.size()];
}

// All words over {0..m-1} by length then lexicographically, concatenated.
std::vector<long> naive_enumeration(long m, std::size_t length) {
  std::vector<long> out;
  for (std::size_t len = 1; out.size() < length; ++len) {
    std::vector<long> w(len, 0);
    for (;;) {
      out.insert(out.end(), w.begin(), w.end());
      std::size_t i = len;
      while (i > 0 && w[i - 1] == m - 1) w[--i] = 0;
      if (i == 0) break;
      ++w[i - 1];
    }
  }
  out.resize(length);
  return out;
}

}  // namespace

TEST_CASE("finite sequences drop trailing zeros") {
  CHECK(CoeffSeq::finite(ints({1, 0, 0})) == CoeffSeq::finite(ints({1})));
  CHECK(CoeffSeq::finite(ints({0, 0})) == CoeffSeq::zero());
  CHECK(CoeffSeq::finite(ints({2, 3})).coeff(5) == 0);
}

TEST_CASE("eventually periodic sequences normalize to a minimal form") {
  const CoeffSeq s = CoeffSeq::periodic(ints({1, 0}), ints({1, 0}));
  CHECK(s.preamble().empty());
  CHECK(s.period() == ints({1, 0}));
  const CoeffSeq t = CoeffSeq::periodic(ints({3, 1, 2}), ints({1, 2, 1, 2}));
  CHECK(t.preamble() == ints({3}));
  CHECK(t.period() == ints({1, 2}));
  // A zero period leaves finite support.
  CHECK(CoeffSeq::periodic(ints({1}), ints({0, 0})).kind() == TailKind::FiniteSupport);
}

TEST_CASE("normalized streams agree with the naive stream and are minimal") {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 300; ++t) {
    std::vector<Rational> pre(gen() % 5), per(1 + gen() % 4);
    for (auto& x : pre) x = static_cast<long>(gen() % 2);
    for (auto& x : per) x = static_cast<long>(gen() % 2);
    const CoeffSeq s = CoeffSeq::periodic(pre, per);
    for (std::size_t n = 0; n < 40; ++n) REQUIRE(s.coeff(n) == naive_coeff(pre, per, n));
    if (s.kind() != TailKind::EventuallyPeriodic) continue;
    // Brute force: smallest (start, period) reproducing the stream on a long window.
    std::size_t best_start = 99, best_period = 99;
    for (std::size_t q = 1; q <= 4 && best_period == 99; ++q) {
      for (std::size_t p0 = 0; p0 <= 5; ++p0) {
        bool ok = true;
        for (std::size_t n = p0; n < 60 && ok; ++n) ok = naive_coeff(pre, per, n) == naive_coeff(pre, per, n + q);
        if (ok) {
          best_start = p0;
          best_period = q;
          break;
        }
      }
    }
    CHECK(s.period().size() == best_period);
    CHECK(s.preamble().size() == best_start);
  }
}

TEST_CASE("shift reads the stream from a later index") {
  std::mt19937_64 gen(5);
  const Alphabet F(ints({0, 1, 2}));
  for (int t = 0; t < 200; ++t) {
    std::vector<Rational> pre(gen() % 6), per(1 + gen() % 3);
    for (auto& x : pre) x = static_cast<long>(gen() % 3);
    for (auto& x : per) x = static_cast<long>(gen() % 3);
    const std::size_t k = gen() % 12;
    for (const CoeffSeq& s : {CoeffSeq::periodic(pre, per), CoeffSeq::finite(pre),
                              CoeffSeq::word_enumeration(F, gen() % 1000)}) {
      const CoeffSeq sk = s.shift(k);
      CHECK(sk.kind() == s.kind());
      for (std::size_t n = 0; n < 20; ++n) REQUIRE(sk.coeff(n) == s.coeff(n + k));
    }
  }
}

TEST_CASE("word enumeration matches a naive generator") {
  for (long m = 1; m <= 3; ++m) {
    std::vector<Rational> letters;
    for (long i = 0; i < m; ++i) letters.emplace_back(i);
    const Alphabet F(letters);
    const auto expected = naive_enumeration(m, 600);
    const CoeffSeq b = CoeffSeq::word_enumeration(F);
    const auto got = b.prefix(600);
    for (std::size_t i = 0; i < 600; ++i) REQUIRE(got[i] == expected[i]);
    // Block starts: positions where the word length grows.
    Index start = 0, power = 1;
    for (std::size_t len = 1; len <= 6; ++len) {
      CHECK(enumeration_block_start(static_cast<std::size_t>(m), len) == start);
      power *= static_cast<Index>(m);
      start += static_cast<Index>(len) * power;
    }
  }
  const auto head = CoeffSeq::word_enumeration(Alphabet(ints({0, 1}))).prefix(10);
  CHECK(head == ints({0, 1, 0, 0, 0, 1, 1, 0, 1, 1}));
}

TEST_CASE("word enumeration respects the alphabet order and huge offsets") {
  const Alphabet F(ints({5, -1}));
  CHECK(CoeffSeq::word_enumeration(F).prefix(4) == ints({5, -1, 5, 5}));
  const Index far = Index(1) << 100;
  const CoeffSeq s = CoeffSeq::word_enumeration(F, far);
  for (std::size_t n = 0; n < 10; ++n) CHECK(F.contains(s.coeff(n)));
  CHECK(s.shift(7).offset() == far + 7);
}

TEST_CASE("membership and value sets") {
  const Alphabet F(ints({0, 1}));
  CHECK(CoeffSeq::periodic(ints({1}), ints({0, 1})).in_EF(F));
  CHECK_FALSE(CoeffSeq::periodic(ints({2}), ints({0, 1})).in_EF(F));
  CHECK(CoeffSeq::periodic(ints({2}), ints({0, 1})).shift(1).in_EF(F));
  CHECK(CoeffSeq::finite(ints({1, 1})).in_EF(F));
  CHECK_FALSE(CoeffSeq::finite(ints({1, 1})).in_EF(Alphabet(ints({1}))));
  CHECK(CoeffSeq::constant(Rational(1)).is_binary());
  CHECK(CoeffSeq::periodic(ints({-3}), ints({2})).sup_abs() == 3);
}

TEST_CASE("sup of coefficient differences matches a brute-force scan") {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<Rational> p1(gen() % 4), q1(1 + gen() % 3), p2(gen() % 4), q2(1 + gen() % 3);
    for (auto* v : {&p1, &q1, &p2, &q2}) {
      for (auto& x : *v) x = static_cast<long>(gen() % 5) - 2;
    }
    const CoeffSeq a = CoeffSeq::periodic(p1, q1), b = CoeffSeq::periodic(p2, q2);
    Rational expected = 0;
    for (std::size_t n = 2; n < 100; ++n) expected = std::max(expected, Rational(abs(a.coeff(n) - b.coeff(n))));
    CHECK(sup_abs_difference(a, b, 2) == expected);
  }
}

TEST_CASE("same_sequence compares streams across tail kinds") {
  CHECK(same_sequence(CoeffSeq::word_enumeration(Alphabet(ints({4}))), CoeffSeq::constant(Rational(4))));
  CHECK(same_sequence(CoeffSeq::finite(ints({1, 2})), CoeffSeq::periodic(ints({1, 2}), ints({0}))));
  CHECK_FALSE(same_sequence(CoeffSeq::finite(ints({1})), CoeffSeq::constant(Rational(1))));
}

TEST_CASE("evaluation encloses the summed series") {
  const SeriesFn ones(CoeffSeq::constant(Rational(1)), 2.0);
  CHECK(oracle::inside(evaluate(ones, 1.0), exp(Real(1))));
  CHECK(oracle::inside(evaluate(ones, 2.0), exp(Real(2))));
  const SeriesFn c(CoeffSeq::periodic({}, ints({1, 0})), 1.0);
  CHECK(oracle::inside(evaluate(c, 0.7), cosh(Real(0.7))));
  const SeriesFn s(CoeffSeq::periodic({}, ints({0, -1, 0, 1})), 3.0);  // -sin
  const BoundInterval v = evaluate(s, 2.5, 1e-13);
  CHECK(oracle::inside(v, -sin(Real(2.5))));
  CHECK(v.width() <= 1e-13);
  const SeriesFn shifted(CoeffSeq::constant(Rational(1)), 1.0, 3.0);
  CHECK(oracle::inside(evaluate(shifted, 3.5), exp(Real(0.5))));
  CHECK_THROWS_AS(evaluate(ones, 2.5), DomainError);
  CHECK_THROWS_AS(evaluate(shifted, 2.0), DomainError);
}

TEST_CASE("differentiation is the coefficient shift") {
  const CoeffSeq a = CoeffSeq::periodic(ints({3, 1}), ints({2, 0, 5}));
  const SeriesFn f(a, 1.5);
  CHECK(differentiate(f).coeffs() == a.shift(1));
  CHECK(differentiate(f, 4).coeffs() == a.shift(4));
  // The derivative bound dominates |f'| on a grid.
  const double bound = derivative_sup_bound(f);
  for (double x = 0; x <= 1.5; x += 0.125) CHECK(abs(evaluate(differentiate(f), x)).hi() <= bound);
}

TEST_CASE("series functions validate their domain") {
  CHECK_THROWS_AS(SeriesFn(CoeffSeq::zero(), 0.0), DomainError);
  CHECK_THROWS_AS(SeriesFn(CoeffSeq::zero(), INFINITY), DomainError);
  CHECK_THROWS_AS(SeriesFn(CoeffSeq::zero(), 1.0, NAN), DomainError);
}

TEST_CASE("alphabets reject repeats and report their diameter") {
  CHECK_THROWS_AS(Alphabet(ints({})), DomainError);
  CHECK_THROWS_AS(Alphabet(ints({1, 1})), DomainError);
  const Alphabet F(ints({2, -1, 0}));
  CHECK(F.diameter() == 3);
  CHECK(F.max_abs() == 2);
  CHECK(Alphabet::distinct(ints({1, 1, 0})) == Alphabet(ints({1, 0})));
  CHECK(Alphabet(ints({0})).is_subset_of(F));
  CHECK(F.merged_with(Alphabet(ints({7, 0}))).size() == 4);
}

TEST_CASE("128-bit indices print and parse") {
  const Index big = ~Index(0);
  CHECK(index_to_string(big) == "340282366920938463463374607431768211455");
  CHECK(parse_index(index_to_string(big)) == big);
  CHECK(parse_index("0") == 0);
  CHECK_THROWS_AS(parse_index("340282366920938463463374607431768211456"), ConfigError);
  CHECK_THROWS_AS(parse_index("12a"), ConfigError);
  CHECK_THROWS_AS(parse_index(""), ConfigError);
}

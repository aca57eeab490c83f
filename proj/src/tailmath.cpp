#include "chaoslab/tailmath.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {
namespace {

enum class RemainderRule { Factorial, Geometric };

struct TailSum {
  Rational partial;    // sum_{i=k}^{K} gamma^i / i!
  Rational remainder;  // certified bound on sum_{i>K}
  unsigned cutoff = 0;
};

// gamma^i / i! for i = 0..n
std::vector<Rational> scaled_terms(const Rational& g, unsigned n) {
  std::vector<Rational> t(n + 1);
  t[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    t[i] = t[i - 1] * g / i;
    t[i].canonicalize();
  }
  return t;
}

// Remainder bound after summing through index K.
Rational remainder_bound(RemainderRule rule, const Rational& g, const Rational& t_k,
                         const Rational& t_k1, unsigned K) {
  if (rule == RemainderRule::Factorial) {
    // sum_{i>K} 1/i! < 1/(K! K)
    Rational r = t_k / K;
    r.canonicalize();
    return r;
  }
  // sum_{i>K} g^i/i! < g^{K+1}/(K+1)! * (K+2)/(K+2-g)
  Rational r = t_k1 * Rational(K + 2) / (Rational(K + 2) - g);
  r.canonicalize();
  return r;
}

bool small_enough(const Rational& remainder, const Rational& partial) {
  if (sgn(partial) == 0) return sgn(remainder) == 0;
  mpz_class scale = 1;
  scale <<= working_precision_bits();
  return remainder * scale < partial;
}

TailSum tail_sum(RemainderRule rule, const Rational& g, unsigned k, unsigned min_cutoff) {
  unsigned K = std::max(k + 10, min_cutoff);
  while (Rational(K + 2) <= g) ++K;
  for (;;) {
    const auto t = scaled_terms(g, K + 1);
    Rational s = 0;
    for (unsigned i = k; i <= K; ++i) s += t[i];
    s.canonicalize();
    Rational r = remainder_bound(rule, g, t[K], t[K + 1], K);
    if (small_enough(r, s) || K > k + 4000) return {s, r, K};
    K += std::max(8U, K / 4);
  }
}

Rational exact_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be a positive finite real");
  }
  return from_double(gamma);
}

unsigned m_gamma_from(double gamma, unsigned n_gamma,
                      const std::function<BoundInterval(unsigned)>& xi_at) {
  const double delta_lo = separation_bound(gamma).lo();
  long last_violation = -1;
  for (unsigned n = 0; n < 100000; ++n) {
    const BoundInterval x = xi_at(n + 1);
    if (x.hi() > delta_lo) last_violation = n;
    if (n + 1 >= n_gamma && x.hi() <= 0.5 * delta_lo) break;
  }
  const unsigned n0 = last_violation < 0 ? 0U : static_cast<unsigned>(last_violation);
  return std::max(n0 + 1, n_gamma);
}

}  // namespace

unsigned working_precision_bits() {
  static const unsigned bits = [] {
    unsigned b = 50;
    if (const char* env = std::getenv("CHAOS_LAB_PRECISION")) {
      try {
        b = static_cast<unsigned>(std::stoul(env));
      } catch (const std::exception&) {
        b = 50;
      }
    }
    return std::clamp(b, 16U, 60U);
  }();
  return bits;
}

BoundInterval eta(unsigned k, unsigned min_cutoff) {
  if (k < 1) throw DomainError("eta: k must be >= 1");
  const TailSum ts = tail_sum(RemainderRule::Factorial, Rational(1), k, min_cutoff);
  return {round_down(ts.partial), round_up(ts.partial + ts.remainder)};
}

BoundInterval zeta(double gamma, unsigned k, unsigned min_cutoff) {
  if (k < 1) throw DomainError("zeta: k must be >= 1");
  const TailSum ts = tail_sum(RemainderRule::Geometric, exact_gamma(gamma), k, min_cutoff);
  return {round_down(ts.partial), round_up(ts.partial + ts.remainder)};
}

BoundInterval xi(double gamma, unsigned k) {
  if (k < 1) throw DomainError("xi: k must be >= 1");
  const Rational g = exact_gamma(gamma);
  const TailSum ts = tail_sum(RemainderRule::Geometric, g, k + 1, 0);
  const Rational head = scaled_terms(g, k)[k];
  const Rational upper = head - ts.partial;
  return {round_down(upper - ts.remainder), round_up(upper)};
}

BoundInterval alpha(unsigned k) {
  if (k < 1) throw DomainError("alpha: k must be >= 1");
  const TailSum ts = tail_sum(RemainderRule::Factorial, Rational(1), k + 1, 0);
  const Rational upper = inverse_factorial(k) - ts.partial;
  return {round_down(upper - ts.remainder), round_up(upper)};
}

unsigned compute_n_gamma(double gamma) {
  const Rational g = exact_gamma(gamma);
  // N1 + 2 > gamma
  unsigned n1 = 0;
  while (Rational(n1 + 2) <= g) ++n1;
  // The ratio gamma (k+2) / ((k+1)(k+2-gamma)) decreases in k once k+2 > gamma,
  // so N2 + 1 is the first k >= 1 where it drops below one.
  unsigned k = 1;
  for (;; ++k) {
    const Rational kk(k);
    if (kk + 2 <= g) continue;
    if (g * (kk + 2) < (kk + 1) * (kk + 2 - g)) break;
  }
  const unsigned n2 = k - 1;
  // N3 > 2 gamma - 1
  unsigned n3 = 0;
  while (Rational(n3) <= 2 * g - 1) ++n3;
  return std::max({1U, n1, n2, n3});
}

BoundInterval separation_bound(double gamma) {
  const Rational g = exact_gamma(gamma);
  const unsigned n = compute_n_gamma(gamma);
  BoundInterval best;
  for (unsigned m = 0; m < n; ++m) {
    BoundInterval b = alpha(m + 1);
    if (gamma <= 1.0) {
      Rational gp = 1;
      for (unsigned i = 0; i <= m; ++i) gp *= g;
      b = enclose(gp) * b;
    }
    best = m == 0 ? b : BoundInterval(std::min(best.lo(), b.lo()), std::min(best.hi(), b.hi()));
  }
  return best;
}

unsigned compute_m_gamma(double gamma) { return shared_tails(gamma)->m_gamma(); }

TailTable TailTable::build(double gamma, unsigned k_max) {
  const Rational g = exact_gamma(gamma);
  if (k_max < 1) throw DomainError("TailTable: k_max must be >= 1");
  TailTable t;
  t.gamma_ = gamma;
  t.k_max_ = k_max;

  // Shared cutoff for every index: certify relative accuracy at the smallest
  // entry (index k_max + 2), the others follow.
  const unsigned top = k_max + 2;
  const TailSum zs = tail_sum(RemainderRule::Geometric, g, top, 0);
  const TailSum es = tail_sum(RemainderRule::Factorial, Rational(1), top, 0);
  const unsigned K = std::max(zs.cutoff, es.cutoff);
  const auto gt = scaled_terms(g, K + 1);
  const auto ft = scaled_terms(Rational(1), K + 1);
  const Rational zr = remainder_bound(RemainderRule::Geometric, g, gt[K], gt[K + 1], K);
  const Rational er = remainder_bound(RemainderRule::Factorial, Rational(1), ft[K], ft[K + 1], K);

  std::vector<Rational> zsum(K + 2), esum(K + 2);
  zsum[K + 1] = 0;
  esum[K + 1] = 0;
  for (unsigned i = K + 1; i-- > 0;) {
    zsum[i] = zsum[i + 1] + gt[i];
    esum[i] = esum[i + 1] + ft[i];
  }

  t.eta_.resize(k_max + 2);
  t.zeta_.resize(k_max + 2);
  t.xi_.resize(k_max + 1);
  t.alpha_.resize(k_max + 1);
  t.term_.resize(k_max + 2);
  for (unsigned k = 1; k <= k_max + 1; ++k) {
    t.zeta_[k] = {round_down(zsum[k]), round_up(zsum[k] + zr)};
    t.eta_[k] = {round_down(esum[k]), round_up(esum[k] + er)};
    t.term_[k] = enclose(gt[k]);
  }
  for (unsigned k = 1; k <= k_max; ++k) {
    const Rational xu = gt[k] - zsum[k + 1];
    t.xi_[k] = {round_down(xu - zr), round_up(xu)};
    const Rational au = ft[k] - esum[k + 1];
    t.alpha_[k] = {round_down(au - er), round_up(au)};
  }
  t.n_gamma_ = compute_n_gamma(gamma);
  t.m_gamma_ = m_gamma_from(gamma, t.n_gamma_, [&t, gamma](unsigned k) {
    return k <= t.k_max_ ? t.xi_[k] : chaoslab::xi(gamma, k);
  });
  return t;
}

namespace {
void check_index(unsigned k, unsigned limit, const char* what) {
  if (k < 1 || k > limit) {
    throw DomainError(std::string("TailTable: index out of range for ") + what);
  }
}
}  // namespace

const BoundInterval& TailTable::eta(unsigned k) const {
  check_index(k, k_max_ + 1, "eta");
  return eta_[k];
}
const BoundInterval& TailTable::zeta(unsigned k) const {
  check_index(k, k_max_ + 1, "zeta");
  return zeta_[k];
}
const BoundInterval& TailTable::xi(unsigned k) const {
  check_index(k, k_max_, "xi");
  return xi_[k];
}
const BoundInterval& TailTable::alpha(unsigned k) const {
  check_index(k, k_max_, "alpha");
  return alpha_[k];
}
const BoundInterval& TailTable::term(unsigned k) const {
  check_index(k, k_max_ + 1, "term");
  return term_[k];
}

unsigned TailTable::first_zeta_below(const BoundInterval& scale, double limit,
                                     unsigned k_min) const {
  for (unsigned k = std::max(1U, k_min); k <= k_max_ + 1; ++k) {
    if ((scale * zeta_[k]).hi() < limit) return k;
  }
  return 0;
}

std::shared_ptr<const TailTable> shared_tails(double gamma, unsigned k_max) {
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const TailTable>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(gamma);
    if (it != cache.end() && it->second->k_max() >= k_max) return it->second;
  }
  unsigned want = std::max(k_max, 128U);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(gamma);
    if (it != cache.end()) want = std::max(want, 2 * it->second->k_max());
  }
  auto table = std::make_shared<const TailTable>(TailTable::build(gamma, want));
  std::lock_guard lock(mu);
  auto& slot = cache[gamma];
  if (!slot || slot->k_max() < table->k_max()) slot = table;
  return slot;
}

}  // namespace chaoslab

#include "chaoslab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaoslab/errors.hpp"
#include "chaoslab/tailmath.hpp"

namespace chaoslab {
namespace {

constexpr unsigned kMaxTailIndex = 4096;

// Certified rho_p(f, g) with hi < bound, tightening the tolerance while the
// enclosure is inconclusive. Returns nullopt if it never gets below.
std::optional<BoundInterval> certify_below(const SeriesFn& f, const SeriesFn& g, const LpSpec& spec,
                                           double bound) {
  BoundInterval d;
  for (double tol = bound * 1e-3; tol >= 1e-13; tol *= 1e-3) {
    d = rho_p(f, g, spec, tol);
    if (d.hi() < bound) return d;
    if (d.lo() >= bound) return std::nullopt;
  }
  return std::nullopt;
}

BoundInterval require_below(const SeriesFn& f, const SeriesFn& g, const LpSpec& spec, double bound,
                            const char* what) {
  if (auto d = certify_below(f, g, spec, bound)) return *d;
  throw InfeasibleTolerance(std::string(what) + ": distance could not be certified below eps");
}

void require_member(const CoeffSeq& s, const Alphabet& F, const char* what) {
  if (!s.in_EF(F)) throw DomainError(std::string(what) + ": sequence has coefficients outside F");
}

BoundInterval diameter_scale(const Alphabet& F, const LpSpec& spec) {
  return gamma_root(spec.gamma, spec.p) * enclose(F.diameter());
}

// gamma^{-1/p} eps, rounded down.
double shrink_by_root(double eps, const LpSpec& spec) {
  return (BoundInterval(eps) / gamma_root(spec.gamma, spec.p)).lo();
}

std::vector<Rational> concat(std::vector<Rational> a, const std::vector<Rational>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<Rational> taylor) : p_(std::move(taylor)) {
  for (auto& x : p_) x.canonicalize();
  while (p_.size() > 1 && sgn(p_.back()) == 0) p_.pop_back();
  if (p_.empty()) p_.emplace_back(0);
}

Alphabet Polynomial::coefficient_set() const {
  std::vector<Rational> v{Rational(0)};
  v.insert(v.end(), p_.begin(), p_.end());
  return Alphabet::distinct(v);
}

unsigned first_index_below(double gamma, const BoundInterval& scale, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (scale.hi() == 0.0) return 1;
  // zeta_N >= gamma^N / N!, so when even the smallest such term up to the
  // index limit stays far above eps, skip building the (costly) tables.
  if (scale.lo() > 0.0) {
    double best = std::numeric_limits<double>::infinity();
    for (unsigned n = 1; n <= kMaxTailIndex; ++n) {
      best = std::min(best, n * std::log(gamma) - std::lgamma(n + 1.0));
    }
    if (best + std::log(scale.lo()) > std::log(eps) + 10.0) {
      throw InfeasibleTolerance("tolerance needs a tail index beyond 4096");
    }
  }
  for (unsigned k_max = 128;; k_max *= 2) {
    const auto tails = shared_tails(gamma, k_max);
    if (const unsigned k = tails->first_zeta_below(scale, eps, 1); k != 0) return k;
    if (k_max >= kMaxTailIndex) throw InfeasibleTolerance("tolerance needs a tail index beyond 4096");
  }
}

// ---------------------------------------------------------------- E_F dynamics

PeriodicApprox periodic_approx_in_EF(const CoeffSeq& f, const Alphabet& F, const LpSpec& spec,
                                     double eps) {
  spec.validate();
  if (F.size() < 2) throw DomainError("periodic_approx_in_EF: F needs at least two values");
  require_member(f, F, "periodic_approx_in_EF");
  PeriodicApprox out;
  out.N = first_index_below(spec.gamma, diameter_scale(F, spec), eps);
  out.g = CoeffSeq::periodic({}, f.prefix(out.N + 1));
  out.distance = require_below(SeriesFn(f, spec.gamma), SeriesFn(out.g, spec.gamma), spec, eps,
                               "periodic_approx_in_EF");
  return out;
}

CoeffSeq dense_orbit_point(const Alphabet& F) { return CoeffSeq::word_enumeration(F, 0); }

Index word_position(const Alphabet& F, const std::vector<Rational>& word) {
  if (word.empty()) throw DomainError("word_position: empty word");
  const std::size_t m = F.size();
  if (m == 1) return 0;
  Index rank = 0;
  for (const auto& letter : word) {
    const auto digit = F.index_of(letter);
    if (!digit) throw DomainError("word_position: letter outside the alphabet");
    if (__builtin_mul_overflow(rank, static_cast<Index>(m), &rank) ||
        __builtin_add_overflow(rank, static_cast<Index>(*digit), &rank)) {
      throw DomainError("word_position: position exceeds 128 bits");
    }
  }
  Index pos = 0;
  if (__builtin_mul_overflow(rank, static_cast<Index>(word.size()), &pos) ||
      __builtin_add_overflow(pos, enumeration_block_start(m, word.size()), &pos)) {
    throw DomainError("word_position: position exceeds 128 bits");
  }
  return pos;
}

OrbitHit orbit_search(const CoeffSeq& g, const CoeffSeq& target, const Alphabet& F,
                      const LpSpec& spec, double eps) {
  spec.validate();
  if (g.kind() != TailKind::WordEnumeration || !(g.alphabet() == F) || g.offset() != 0) {
    throw DomainError("orbit_search: g must be the word enumeration over F");
  }
  require_member(target, F, "orbit_search");
  OrbitHit hit;
  hit.N = first_index_below(spec.gamma, diameter_scale(F, spec), eps);
  hit.l = word_position(F, target.prefix(hit.N + 1));
  hit.distance = require_below(SeriesFn(g.shift(hit.l), spec.gamma), SeriesFn(target, spec.gamma),
                               spec, eps, "orbit_search");
  return hit;
}

TransitivityWitness transitivity_witness(const CoeffSeq& u, const CoeffSeq& v, double eps_u,
                                         double eps_v, const Alphabet& F, const LpSpec& spec) {
  spec.validate();
  require_member(u, F, "transitivity_witness");
  require_member(v, F, "transitivity_witness");
  TransitivityWitness w;
  const SeriesFn U(u, spec.gamma);
  const SeriesFn V(v, spec.gamma);

  if (same_sequence(u, v) && u.kind() == TailKind::EventuallyPeriodic && u.preamble().empty()) {
    // A periodic point returns to itself.
    w.h = u;
    w.n = u.period().size();
  } else {
    const BoundInterval scale = diameter_scale(F, spec);
    const unsigned Nu = first_index_below(spec.gamma, scale, eps_u);
    w.n = Nu + 1;
    const auto head = u.prefix(Nu + 1);
    switch (v.kind()) {
      case TailKind::FiniteSupport: w.h = CoeffSeq::finite(concat(head, v.preamble())); break;
      case TailKind::EventuallyPeriodic:
        w.h = CoeffSeq::periodic(concat(head, v.preamble()), v.period());
        break;
      case TailKind::WordEnumeration: {
        // Not splicable exactly: embed v's prefix and close with a constant.
        const unsigned Nv = first_index_below(spec.gamma, scale, eps_v);
        w.h = CoeffSeq::periodic(concat(head, v.prefix(Nv + 1)), {F[0]});
        break;
      }
    }
  }
  const SeriesFn H(w.h, spec.gamma);
  w.distance_u = require_below(H, U, spec, eps_u, "transitivity_witness");
  w.distance_v = require_below(differentiate(H, w.n), V, spec, eps_v, "transitivity_witness");
  return w;
}

// ---------------------------------------------------------------- Weierstrass

namespace {

// sum_k f_k C(n,k) t^k (1-t)^{n-k} on t in [0,1], in interval arithmetic.
BoundInterval bernstein_eval(const std::vector<BoundInterval>& weighted, const BoundInterval& t) {
  const std::size_t n = weighted.size() - 1;
  if (n == 0) return weighted[0];
  const BoundInterval one(1.0);
  BoundInterval acc(0.0);
  if (t.hi() <= 0.5) {
    const BoundInterval u = one - t;
    const BoundInterval s = t / u;
    for (std::size_t k = n + 1; k-- > 0;) acc = acc * s + weighted[k];
    return acc * pow(u, static_cast<unsigned>(n));
  }
  const BoundInterval r = (one - t) / t;
  for (std::size_t k = 0; k <= n; ++k) acc = acc * r + weighted[k];
  return acc * pow(t, static_cast<unsigned>(n));
}

Rational binomial(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(b);
}

}  // namespace

BernsteinResult bernstein_approx(const std::function<BoundInterval(double)>& sample, double lipschitz,
                                 double gamma, double eps, unsigned max_degree) {
  if (!(gamma > 0.0) || !(eps > 0.0)) throw DomainError("bernstein_approx: gamma and eps must be positive");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
    throw DomainError("bernstein_approx: Lipschitz constant must be finite");
  }
  const BoundInterval G(gamma);
  const Rational gamma_q = from_double(gamma);

  for (unsigned n = 0; n <= max_degree; n = n == 0 ? 1 : 2 * n) {
    std::vector<Rational> f(n + 1);
    for (unsigned k = 0; k <= n; ++k) {
      const double x = n == 0 ? 0.0 : (G * BoundInterval(static_cast<double>(k)) /
                                       BoundInterval(static_cast<double>(n))).mid();
      const BoundInterval y = sample(std::clamp(x, 0.0, gamma));
      f[k] = from_double(y.lo()) + (from_double(y.hi()) - from_double(y.lo())) / 2;
    }
    std::vector<BoundInterval> weighted(n + 1);
    Rational max_step = 0;
    for (unsigned k = 0; k <= n; ++k) {
      weighted[k] = enclose(Rational(f[k] * binomial(n, k)));
      if (k > 0) max_step = std::max(max_step, abs(Rational(f[k] - f[k - 1])));
    }
    // |P'| <= n max |f_{k+1} - f_k| / gamma for the Bernstein form.
    const BoundInterval lip_P = enclose(Rational(max_step * n)) / G;
    const double slope = (BoundInterval(lipschitz) + lip_P).hi();
    // Grid spacing so the between-node slack slope * h / 2 is at most eps / 4.
    const double cells_d = std::ceil((BoundInterval(2.0 * gamma) * BoundInterval(slope) /
                                      BoundInterval(eps / 4)).hi() / 2.0);
    if (cells_d > 4e6) continue;
    const auto cells = std::max<std::size_t>(1, static_cast<std::size_t>(cells_d));
    const BoundInterval h = G / BoundInterval(static_cast<double>(cells));
    double worst = 0.0;
    for (std::size_t i = 0; i <= cells && worst < eps; ++i) {
      const BoundInterval x = h * BoundInterval(static_cast<double>(i));
      const double xd = std::clamp(x.mid(), 0.0, gamma);
      const BoundInterval t = BoundInterval(xd) / G;
      const BoundInterval tc(std::max(t.lo(), 0.0), std::min(t.hi(), 1.0));
      const BoundInterval diff = sample(xd) - bernstein_eval(weighted, tc);
      worst = std::max(worst, abs(diff).hi());
    }
    // Every x is within h/2 of a node, up to the rounding of the node itself.
    const double slack = (BoundInterval(slope) * h / BoundInterval(2.0)).hi();
    const double bound = (BoundInterval(worst) + BoundInterval(slack)).hi() * (1 + 1e-12);
    if (bound >= eps) continue;

    // Taylor form: p_j = j! gamma^{-j} sum_{k<=j} f_k C(n,k) C(n-k,j-k) (-1)^{j-k}.
    std::vector<Rational> p(n + 1);
    Rational gamma_pow = 1;
    mpz_class fact = 1;
    for (unsigned j = 0; j <= n; ++j) {
      if (j > 0) {
        gamma_pow *= gamma_q;
        fact *= j;
      }
      Rational c = 0;
      for (unsigned k = 0; k <= j; ++k) {
        const Rational term = f[k] * binomial(n, k) * binomial(n - k, j - k);
        if ((j - k) % 2 == 0) c += term; else c -= term;
      }
      p[j] = c * Rational(fact) / gamma_pow;
    }
    return {Polynomial(std::move(p)), n, bound};
  }
  throw CertificationFailure("bernstein_approx: no degree up to the maximum certifies eps");
}

Polynomial ensure_two_coeff_values(const Polynomial& P, const Rational& eps) {
  if (sgn(eps) <= 0) throw DomainError("ensure_two_coeff_values: eps must be positive");
  if (P.coefficient_set().size() >= 2) return P;
  return Polynomial::constant(eps / 4);
}

Polynomial ensure_two_coeff_values(const Polynomial& P, double eps) {
  if (!(eps > 0.0)) throw DomainError("ensure_two_coeff_values: eps must be positive");
  return ensure_two_coeff_values(P, from_double(eps));
}

// ---------------------------------------------------------------- E_F approximation

EFApproximation ef_approximation(const Polynomial& P, const LpSpec& spec, double eps) {
  spec.validate();
  const Polynomial Q = ensure_two_coeff_values(P, shrink_by_root(eps, spec));
  EFApproximation out;
  out.F = Q.coefficient_set();
  out.member = Q.as_sequence();
  out.distance = require_below(P.as_function(spec.gamma), Q.as_function(spec.gamma), spec, eps,
                               "ef_approximation");
  return out;
}

Polynomial taylor_truncation(const SeriesFn& f, double eps) {
  if (!(eps > 0.0)) throw DomainError("taylor_truncation: eps must be positive");
  const CoeffSeq& a = f.coeffs();
  const CoeffSeq zero = CoeffSeq::zero();
  auto tails = shared_tails(f.gamma());
  for (std::size_t K = 0;; ++K) {
    const Rational sup_tail = sup_abs_difference(a, zero, K + 1);
    if (sgn(sup_tail) == 0) return Polynomial(a.prefix(K + 1));
    if (K + 1 > tails->k_max()) {
      if (tails->k_max() >= kMaxTailIndex) throw InfeasibleTolerance("taylor_truncation: eps too small");
      tails = shared_tails(f.gamma(), 2 * tails->k_max());
    }
    if ((enclose(sup_tail) * tails->zeta(static_cast<unsigned>(K + 1))).hi() < eps) {
      return Polynomial(a.prefix(K + 1));
    }
  }
}

EFApproximation ef_approximation(const SeriesFn& f, const LpSpec& spec, double eps) {
  spec.validate();
  if (f.gamma() != spec.gamma) throw DomainError("ef_approximation: domain differs from spec");
  const double sup_eps = shrink_by_root(eps, spec);
  const Polynomial P = taylor_truncation(f, sup_eps / 2);
  const Polynomial Q = ensure_two_coeff_values(P, sup_eps);
  EFApproximation out;
  out.F = Q.coefficient_set();
  out.member = Q.as_sequence();
  out.distance = require_below(SeriesFn(f.coeffs(), f.gamma()), Q.as_function(spec.gamma), spec, eps,
                               "ef_approximation");
  return out;
}

EFApproximation ef_approximation(const std::function<BoundInterval(double)>& sample, double lipschitz,
                                 const LpSpec& spec, double eps) {
  spec.validate();
  const double sup_eps = shrink_by_root(eps, spec);
  const BernsteinResult b = bernstein_approx(sample, lipschitz, spec.gamma, sup_eps / 2);
  const Polynomial Q = ensure_two_coeff_values(b.P, sup_eps);
  EFApproximation out;
  out.F = Q.coefficient_set();
  out.member = Q.as_sequence();
  // Triangle inequality through the Bernstein polynomial, then L^p <= gamma^{1/p} L^inf.
  const BoundInterval shift = rho_p(b.P.as_function(spec.gamma), Q.as_function(spec.gamma),
                                    LpSpec::sup(spec.gamma), sup_eps * 1e-6);
  const double upper = (gamma_root(spec.gamma, spec.p) * (BoundInterval(b.sup_error) + shift)).hi();
  if (!(upper < eps)) throw InfeasibleTolerance("ef_approximation: bound does not close below eps");
  out.distance = BoundInterval(0.0, upper);
  return out;
}

std::vector<Alphabet> filtration(const std::vector<Polynomial>& approximants, const LpSpec& spec) {
  spec.validate();
  std::vector<Alphabet> out;
  for (std::size_t k = 1; k <= approximants.size(); ++k) {
    // Keep 1/k exact when no gamma^{-1/p} factor applies.
    const BoundInterval root = gamma_root(spec.gamma, spec.p);
    const Rational eps = root == BoundInterval(1.0)
                             ? Rational(1, static_cast<unsigned long>(k))
                             : from_double(shrink_by_root(1.0 / static_cast<double>(k), spec));
    const Alphabet step = ensure_two_coeff_values(approximants[k - 1], eps).coefficient_set();
    out.push_back(out.empty() ? step : out.back().merged_with(step));
  }
  return out;
}

std::vector<FiltrationStep> filtration(const SeriesFn& f, const LpSpec& spec, std::size_t steps) {
  std::vector<FiltrationStep> out;
  for (std::size_t k = 1; k <= steps; ++k) {
    const EFApproximation a = ef_approximation(f, spec, 1.0 / static_cast<double>(k));
    FiltrationStep s;
    s.F = out.empty() ? a.F : out.back().F.merged_with(a.F);
    s.member = a.member;
    s.distance = a.distance;
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------- full space

PeriodicPoint periodic_point_in_cinf(const Polynomial& P, const LpSpec& spec, double eps) {
  spec.validate();
  const Alphabet F = P.coefficient_set();
  if (F.size() < 2) throw DomainError("periodic_point_in_cinf: F(P) needs two values");
  PeriodicPoint out;
  // zeta_N < gamma^{-1/p} eps / (2 diam F)
  out.N = first_index_below(spec.gamma, diameter_scale(F, spec) * BoundInterval(2.0), eps);
  const std::size_t L_prime = std::max<std::size_t>(P.degree(), out.N);
  std::vector<Rational> period = P.taylor();
  period.resize(L_prime + 1, Rational(0));
  out.period_length = period.size();
  out.g = CoeffSeq::periodic({}, std::move(period));
  out.distance = require_below(P.as_function(spec.gamma), SeriesFn(out.g, spec.gamma), spec, eps / 2,
                               "periodic_point_in_cinf");
  return out;
}

SensitivityWitness sensitivity_witness(const SeriesFn& f, double beta, double eps,
                                       const std::optional<Polynomial>& approximant,
                                       bool assert_unbounded_derivatives) {
  if (assert_unbounded_derivatives) {
    throw DomainError(
        "sensitivity_witness: coefficient-backed functions have bounded derivatives "
        "(sup_k ||f^(k)|| <= sup|a_n| e^gamma)");
  }
  if (!(beta > 0.0) || !(eps > 0.0)) throw DomainError("sensitivity_witness: beta and eps must be positive");
  const double gamma = f.gamma();
  const LpSpec sup = LpSpec::sup(gamma);

  SensitivityWitness w;
  w.beta = beta;
  w.eps = eps;
  if (approximant) {
    w.P = *approximant;
  } else {
    w.P = taylor_truncation(f, eps / 4);
    if (w.P.is_zero()) {
      // The lift by alpha keeps rho(f, P) <= eps/2; exact when f = 0.
      const bool f_zero = same_sequence(f.coeffs(), CoeffSeq::zero());
      w.P = Polynomial::constant(from_double(eps) / (f_zero ? 2 : 4));
    }
  }
  const auto& p = w.P.taylor();
  const std::size_t N = w.P.degree();

  // M = sup_k ||f^(k)||_inf <= sup|a_n| e^gamma.
  const Rational a_sup = f.coeffs().sup_abs();
  // Rounded up to a multiple of 2^-20 to keep c readable.
  if (sgn(a_sup) != 0) {
    const double m = (enclose(a_sup) * (BoundInterval(1.0) + shared_tails(gamma)->zeta(1))).hi();
    w.M = from_double(std::ceil(std::ldexp(m, 20)));
    mpq_div_2exp(w.M.get_mpq_t(), w.M.get_mpq_t(), 20);
  }
  Rational top = 0;
  for (const auto& v : p) top = std::max(top, v);
  w.c = top + w.M + from_double(beta);

  std::vector<Rational> values = p;
  values.push_back(Rational(0));
  values.push_back(w.c);
  const Alphabet F = Alphabet::distinct(values);
  // zeta_{N'+1} < eps / (2 diam F), N' >= 0.
  const unsigned N_prime = first_index_below(gamma, enclose(F.diameter()) * BoundInterval(2.0), eps) - 1;
  const std::size_t L = std::max<std::size_t>(N, N_prime);
  w.n = L + 1;
  std::vector<Rational> head = p;
  head.resize(L + 1, Rational(0));
  w.g = SeriesFn(CoeffSeq::periodic(std::move(head), {w.c}), gamma, f.origin());

  w.close = BoundInterval(0.0, std::numeric_limits<double>::infinity());
  if (auto d = certify_below(f, w.g, sup, eps)) w.close = *d;
  w.far = rho_p(differentiate(f, w.n), differentiate(w.g, w.n), sup, std::max(beta, 1.0) * 1e-9);
  if (!(w.close.hi() < eps) || !(w.far.lo() > beta)) {
    throw CertificationFailure("sensitivity_witness: certificates are not strict");
  }
  return w;
}

}  // namespace chaoslab

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chaoslab/coeffspace.hpp"
#include "chaoslab/metrics.hpp"

namespace chaoslab {

// P(x) = sum p_n x^n / n!, stored as p_0..p_N with no trailing zero unless N = 0.
class Polynomial {
 public:
  Polynomial() : p_{Rational(0)} {}
  explicit Polynomial(std::vector<Rational> taylor);
  static Polynomial constant(const Rational& c) { return Polynomial({c}); }

  const std::vector<Rational>& taylor() const { return p_; }
  std::size_t degree() const { return p_.size() - 1; }
  bool is_zero() const { return p_.size() == 1 && sgn(p_[0]) == 0; }

  // F(P) = {0, p_0, ..., p_N}, in that order, repeats dropped.
  Alphabet coefficient_set() const;
  CoeffSeq as_sequence() const { return CoeffSeq::finite(p_); }
  SeriesFn as_function(double gamma) const { return SeriesFn(as_sequence(), gamma); }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<Rational> p_;
};

// Smallest N >= 1 with (scale * zeta_N).hi < eps; InfeasibleTolerance if the
// tables run out first.
unsigned first_index_below(double gamma, const BoundInterval& scale, double eps);

struct PeriodicApprox {
  CoeffSeq g = CoeffSeq::zero();
  unsigned N = 0;  // g repeats a_0..a_N
  BoundInterval distance;
};

// Repeats the prefix a_0..a_N of f, N minimal with gamma^{1/p} diam(F) zeta_N < eps.
PeriodicApprox periodic_approx_in_EF(const CoeffSeq& f, const Alphabet& F, const LpSpec& spec,
                                     double eps);

// Concatenation of all words over F, by length then lexicographically.
CoeffSeq dense_orbit_point(const Alphabet& F);

struct OrbitHit {
  Index l = 0;
  unsigned N = 0;  // length of the matched prefix is N + 1
  BoundInterval distance;
};

// Closed-form position l of the prefix a_0..a_N of target in the word
// enumeration, so that shift^l(g) is eps-close to target.
OrbitHit orbit_search(const CoeffSeq& g, const CoeffSeq& target, const Alphabet& F,
                      const LpSpec& spec, double eps);

// Index of a word in the enumeration: start of its length block plus
// length times its lexicographic rank.
Index word_position(const Alphabet& F, const std::vector<Rational>& word);

struct TransitivityWitness {
  CoeffSeq h = CoeffSeq::zero();
  Index n = 0;
  BoundInterval distance_u;  // rho_p(h, u)
  BoundInterval distance_v;  // rho_p(shift^n h, v)
};

TransitivityWitness transitivity_witness(const CoeffSeq& u, const CoeffSeq& v, double eps_u,
                                         double eps_v, const Alphabet& F, const LpSpec& spec);

struct BernsteinResult {
  Polynomial P;
  unsigned degree = 0;
  double sup_error = 0.0;  // certified bound on sup |f - P|
};

// sample(x) must enclose f(x) on [0, gamma]; lipschitz bounds |f'|.
// Doubles the degree until a grid check with Lipschitz slack certifies
// sup |f - P| < eps; CertificationFailure past max_degree.
BernsteinResult bernstein_approx(const std::function<BoundInterval(double)>& sample, double lipschitz,
                                 double gamma, double eps, unsigned max_degree = 512);

// Unchanged when #F(P) >= 2; otherwise P = 0 becomes the constant eps/4.
Polynomial ensure_two_coeff_values(const Polynomial& P, double eps);
Polynomial ensure_two_coeff_values(const Polynomial& P, const Rational& eps);

struct EFApproximation {
  Alphabet F{{Rational(0), Rational(1)}};
  CoeffSeq member = CoeffSeq::zero();
  BoundInterval distance;  // rho_p(target, member)
};

// F = F(P') for P' = ensure_two_coeff_values(P, gamma^{-1/p} eps); member = P'.
EFApproximation ef_approximation(const Polynomial& P, const LpSpec& spec, double eps);

// Coefficient-backed target: truncate the series to a sup-approximant, then
// as above, certifying rho_p(f, member) < eps directly.
EFApproximation ef_approximation(const SeriesFn& f, const LpSpec& spec, double eps);

// Sampled target: Bernstein approximant first.
EFApproximation ef_approximation(const std::function<BoundInterval(double)>& sample, double lipschitz,
                                 const LpSpec& spec, double eps);

// Taylor truncation P of f with sup |f - P| < eps (certified by the tail bound).
Polynomial taylor_truncation(const SeriesFn& f, double eps);

// F(n) = union_{k<=n} F'(k), F'(k) = F(ensure_two_coeff_values(P_k, gamma^{-1/p}/k)).
std::vector<Alphabet> filtration(const std::vector<Polynomial>& approximants, const LpSpec& spec);

struct FiltrationStep {
  Alphabet F{{Rational(0), Rational(1)}};
  CoeffSeq member = CoeffSeq::zero();
  BoundInterval distance;  // rho_p(f, member) < 1/n
};

std::vector<FiltrationStep> filtration(const SeriesFn& f, const LpSpec& spec, std::size_t steps);

struct PeriodicPoint {
  CoeffSeq g = CoeffSeq::zero();
  unsigned N = 0;
  std::size_t period_length = 0;  // L' + 1
  BoundInterval distance;         // rho_p(P, g) < eps/2
};

// Pads p_0..p_n with zeros to length max(n, N) + 1 and repeats it.
PeriodicPoint periodic_point_in_cinf(const Polynomial& P, const LpSpec& spec, double eps);

struct SensitivityWitness {
  SeriesFn g{CoeffSeq::zero(), 1.0};
  Index n = 0;
  double beta = 0.0;
  double eps = 0.0;
  Polynomial P;
  Rational c;
  Rational M;  // upper bound on sup_k ||f^(k)||_inf
  BoundInterval close;  // rho_inf(f, g)
  BoundInterval far;    // rho_inf(f^(n), g^(n))
};

// g eps-close to f whose n-th derivative is beta-far from f^(n). Without an
// explicit approximant, P is the Taylor truncation of f within eps/2 (when
// that is 0, the constant eps/2). CertificationFailure if the strict
// certificates cannot be established; DomainError when the unbounded
// derivative case is asserted, since no representable f is in that case.
SensitivityWitness sensitivity_witness(const SeriesFn& f, double beta, double eps,
                                       const std::optional<Polynomial>& approximant = std::nullopt,
                                       bool assert_unbounded_derivatives = false);

}  // namespace chaoslab

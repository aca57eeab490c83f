#include "chaoslab/conjugacy.hpp"

#include "chaoslab/errors.hpp"
#include "chaoslab/tailmath.hpp"

namespace chaoslab {

SeriesFn iota(const CoeffSeq& a, double gamma) {
  if (!a.is_binary()) throw DomainError("iota: coefficients must lie in {0,1}");
  return SeriesFn(a, gamma, 0.0);
}

CoeffSeq iota_inverse(const SeriesFn& f) {
  if (f.origin() != 0.0 || !f.coeffs().is_binary()) {
    throw DomainError("iota_inverse: function is not in E");
  }
  return f.coeffs();
}

SquareReport check_commuting_square(const CoeffSeq& a, double gamma, std::size_t window,
                                    const std::optional<CoeffSeq>& partner) {
  SquareReport report;
  const SeriesFn f = iota(a, gamma);
  const CoeffSeq left = iota(a.shift(), gamma).coeffs();  // iota o sigma
  const CoeffSeq right = differentiate(f).coeffs();       // d/dx o iota
  for (std::size_t n = 0; n < window; ++n) {
    // Both must equal the source coefficient a_{n+1}.
    const Rational want = a.coeff(n + 1);
    if (left.coeff(n) != want || right.coeff(n) != want) report.violated_indices.push_back(n);
  }
  report.tail_kind_match = left.kind() == right.kind() && left.kind() == a.kind();
  if (partner) {
    const SeriesFn g = iota(*partner, gamma);
    report.d_E_value = d_E(iota_inverse(f), iota_inverse(g));
    report.weighted_value = weighted_product_metric(a, *partner, factorial_weights());
    report.isometry_ok = report.d_E_value->overlaps(*report.weighted_value);
  }
  report.pass = report.violated_indices.empty() && report.tail_kind_match && report.isometry_ok;
  return report;
}

SeriesFn translate(const SeriesFn& f, double a) {
  if (f.origin() != 0.0) throw DomainError("translate: function must start at the origin");
  return SeriesFn(f.coeffs(), f.gamma(), a);
}

SeriesFn untranslate(const SeriesFn& f) { return SeriesFn(f.coeffs(), f.gamma(), 0.0); }

TranslationReport check_translation_isometry(const SeriesFn& f, const SeriesFn& g, double a,
                                             const LpSpec& spec, double tol) {
  TranslationReport report;
  const SeriesFn Tf = translate(f, a);
  const SeriesFn Tg = translate(g, a);
  report.before = rho_p(f, g, spec, tol);
  report.after = rho_p(Tf, Tg, spec, tol);
  report.derivative_commutes = differentiate(Tf) == translate(differentiate(f), a) &&
                               differentiate(Tg) == translate(differentiate(g), a);
  report.inverse_identity = untranslate(Tf) == f && untranslate(Tg) == g &&
                            translate(untranslate(Tf), a) == Tf;
  report.pass = report.before.overlaps(report.after) && report.derivative_commutes &&
                report.inverse_identity;
  return report;
}

IsolationProbe probe_not_isolated(const SeriesFn& f, double delta, const LpSpec& spec) {
  if (!(delta > 0.0)) throw DomainError("probe_not_isolated: delta must be positive");
  // Agreement up to index n bounds the sup distance by zeta_{n+1}.
  const auto tails = shared_tails(f.gamma(), 256);
  const BoundInterval scale = gamma_root(f.gamma(), spec.p);
  const unsigned k = tails->first_zeta_below(scale, delta, 1);
  if (k == 0) throw InfeasibleTolerance("probe_not_isolated: delta below the tabulated tails");

  IsolationProbe probe;
  probe.flipped_index = k;
  const CoeffSeq& a = f.coeffs();
  std::vector<Rational> head = a.prefix(k + 1);
  head[k] = sgn(head[k]) == 0 ? Rational(1) : Rational(0);
  if (a.kind() == TailKind::FiniteSupport) {
    probe.neighbour = CoeffSeq::finite(head);
  } else if (a.kind() == TailKind::EventuallyPeriodic) {
    const CoeffSeq rest = a.shift(k + 1);
    std::vector<Rational> pre = head;
    pre.insert(pre.end(), rest.preamble().begin(), rest.preamble().end());
    probe.neighbour = CoeffSeq::periodic(std::move(pre), rest.period());
  } else {
    throw DomainError("probe_not_isolated: word enumerations have no finite splice");
  }
  const SeriesFn g(probe.neighbour, f.gamma(), f.origin());
  probe.distance = rho_p(f, g, spec, delta * 1e-3);
  probe.pass = !same_sequence(f.coeffs(), probe.neighbour) && probe.distance.hi() < delta;
  return probe;
}

}  // namespace chaoslab

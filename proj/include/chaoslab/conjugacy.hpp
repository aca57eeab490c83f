#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chaoslab/coeffspace.hpp"
#include "chaoslab/metrics.hpp"

namespace chaoslab {

// {0,1}-sequence a -> f(x) = sum a_n x^n / n! on [0, gamma].
SeriesFn iota(const CoeffSeq& a, double gamma);
// Coefficient extraction; DomainError unless f is in E with origin 0.
CoeffSeq iota_inverse(const SeriesFn& f);

struct SquareReport {
  bool pass = true;
  std::vector<std::size_t> violated_indices;
  bool tail_kind_match = true;
  // Present when a partner sequence was supplied.
  std::optional<BoundInterval> d_E_value;
  std::optional<BoundInterval> weighted_value;
  bool isometry_ok = true;
};

// iota(shift(a)) against d/dx iota(a): coefficientwise over [0, window) plus
// tail kind, and optionally d_E(iota a, iota b) against the product metric
// with weights 2^i/(i+1)!.
SquareReport check_commuting_square(const CoeffSeq& a, double gamma, std::size_t window = 128,
                                    const std::optional<CoeffSeq>& partner = std::nullopt);

// (T f)(x) = f(x - a): the origin moves from 0 to a.
SeriesFn translate(const SeriesFn& f, double a);
// Inverse of translate: the origin moves back to 0.
SeriesFn untranslate(const SeriesFn& f);

struct TranslationReport {
  bool pass = true;
  BoundInterval before;
  BoundInterval after;
  bool derivative_commutes = true;
  bool inverse_identity = true;
};

TranslationReport check_translation_isometry(const SeriesFn& f, const SeriesFn& g, double a,
                                             const LpSpec& spec, double tol = 1e-9);

struct IsolationProbe {
  std::size_t flipped_index = 0;
  CoeffSeq neighbour = CoeffSeq::zero();
  BoundInterval distance;
  bool pass = false;
};

// Flips the first coefficient n with zeta_{n+1} < delta and certifies that the
// resulting g != f lies within rho_p distance delta.
IsolationProbe probe_not_isolated(const SeriesFn& f, double delta, const LpSpec& spec);

}  // namespace chaoslab

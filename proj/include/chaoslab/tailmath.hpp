#pragma once

#include <memory>
#include <vector>

#include "chaoslab/bound_interval.hpp"
#include "chaoslab/rational.hpp"

namespace chaoslab {

// Relative cutoff (in bits) used when truncating the tail series: a partial
// sum is accepted once the certified remainder is below 2^-bits of it.
// Read once from CHAOS_LAB_PRECISION; default 50.
unsigned working_precision_bits();

// eta_k = sum_{i>=k} 1/i!. Requires k >= 1. The remainder after the last
// summed index K is bounded by 1/(K! K). `min_cutoff` forces the partial sum
// to run at least to that index.
BoundInterval eta(unsigned k, unsigned min_cutoff = 0);

// zeta_k = sum_{i>=k} gamma^i/i!. Remainder after index K is bounded by
// gamma^{K+1}/(K+1)! * (K+2)/(K+2-gamma), valid once K+2 > gamma.
BoundInterval zeta(double gamma, unsigned k, unsigned min_cutoff = 0);

// xi_k = gamma^k/k! - zeta_{k+1}.
BoundInterval xi(double gamma, unsigned k);

// alpha_k = 1/k! - eta_{k+1}.
BoundInterval alpha(unsigned k);

// max{N1, N2, N3} from the positivity/monotonicity argument for xi_k, clamped
// to at least 1:
//   N1: least natural with N1 + 2 > gamma,
//   N2: least natural with gamma/(k+1) * (k+2)/(k+2-gamma) < 1 for all k > N2,
//   N3: least natural with N3 > 2 gamma - 1.
unsigned compute_n_gamma(double gamma);

// Threshold past which rho_1(f, g) < xi_{k+1} forces a_j = b_j for j <= k.
// Built from the constructive lower bounds delta_m >= alpha_{m+1}
// (gamma > 1) or gamma^{m+1} alpha_{m+1} (gamma <= 1), m < N_gamma.
unsigned compute_m_gamma(double gamma);

// Lower bound on delta used by compute_m_gamma.
BoundInterval separation_bound(double gamma);

// Precomputed, immutable enclosures for one gamma and indices 1..k_max.
class TailTable {
 public:
  static TailTable build(double gamma, unsigned k_max);

  double gamma() const { return gamma_; }
  unsigned k_max() const { return k_max_; }
  unsigned n_gamma() const { return n_gamma_; }
  unsigned m_gamma() const { return m_gamma_; }

  // All accessors require 1 <= k <= k_max (zeta also accepts k_max + 1).
  const BoundInterval& eta(unsigned k) const;
  const BoundInterval& zeta(unsigned k) const;
  const BoundInterval& xi(unsigned k) const;
  const BoundInterval& alpha(unsigned k) const;
  // gamma^k / k!
  const BoundInterval& term(unsigned k) const;

  // Smallest k >= k_min with bound * zeta(k).hi < limit; 0 if none <= k_max.
  unsigned first_zeta_below(const BoundInterval& scale, double limit, unsigned k_min = 1) const;

 private:
  TailTable() = default;

  double gamma_ = 0.0;
  unsigned k_max_ = 0;
  unsigned n_gamma_ = 0;
  unsigned m_gamma_ = 0;
  std::vector<BoundInterval> eta_, zeta_, xi_, alpha_, term_;
};

// Process-wide cache of tables; safe to call from several threads. The table
// returned covers at least `k_max`.
std::shared_ptr<const TailTable> shared_tails(double gamma, unsigned k_max = 128);

}  // namespace chaoslab

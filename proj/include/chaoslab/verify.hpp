#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "chaoslab/coeffspace.hpp"
#include "chaoslab/constructions.hpp"
#include "chaoslab/serialization.hpp"

namespace chaoslab {

// Seeded generator with its own integer/real mapping, so draws are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n);  // uniform in [0, n)
  double uniform(double lo, double hi);
  bool coin() { return (next() >> 63) != 0; }
  // p/q with |p| <= max_num, q in {1, 2, 4}.
  Rational small_rational(int max_num = 8);

 private:
  std::mt19937_64 engine_;
};

CoeffSeq random_periodic(Rng& rng, const Alphabet& F, std::size_t max_preamble, std::size_t max_period);
CoeffSeq random_finite(Rng& rng, const Alphabet& F, std::size_t max_length);
Polynomial random_polynomial(Rng& rng, std::size_t max_degree);
Alphabet random_alphabet(Rng& rng, std::size_t min_size, std::size_t max_size);

// Every eventually periodic sequence over F with preamble length <= max_preamble
// and period length in [1, max_period], deduplicated after normalization.
std::vector<CoeffSeq> periodic_family(const Alphabet& F, std::size_t max_preamble, std::size_t max_period);

// First index where the streams differ, scanning [0, limit); limit if none.
std::size_t first_disagreement(const CoeffSeq& a, const CoeffSeq& b, std::size_t limit);

struct PropertyResult {
  std::string suite;
  std::string property;
  bool pass = true;
  std::size_t checked = 0;
  Json counterexample;  // first failing case, null when passing
};

Json to_json(const PropertyResult& r);

// Individual properties. Each returns one result; failures carry the first
// counterexample.
PropertyResult tail_monotonicity(const std::vector<double>& gammas, unsigned k_max);
PropertyResult tail_vanishing(const std::vector<double>& gammas, unsigned k_max);
PropertyResult xi_threshold(const std::vector<double>& gammas, std::size_t window);
PropertyResult alpha_positivity(unsigned k_max);
PropertyResult enclosure_nesting(const std::vector<double>& gammas, unsigned k_max);

PropertyResult shift_derivative_coherence(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult periodic_shift_return(Rng& rng, std::size_t trials);
PropertyResult word_enumeration_completeness(std::size_t max_alphabet, std::size_t max_word);
PropertyResult membership_shift_invariance(Rng& rng, std::size_t trials);
PropertyResult json_round_trip(Rng& rng, std::size_t trials);

PropertyResult metric_axioms(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult holder_inequality(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
// Agreement on 0..k bounds d_E by eta_{k+2}, over a brute-force family.
PropertyResult agreement_bounds_dE(std::size_t max_preamble, std::size_t max_period, std::size_t k_max);
// d_E < 1/(k+1)! forces agreement on 0..k.
PropertyResult small_dE_forces_agreement(std::size_t max_preamble, std::size_t max_period, std::size_t k_max);
// Agreement on 0..k bounds rho_inf by diam(F) zeta_{k+1}.
PropertyResult agreement_bounds_sup(const std::vector<Alphabet>& alphabets, const std::vector<double>& gammas,
                                    std::size_t max_preamble, std::size_t max_period);
// For k >= M_gamma, rho_1 < xi_{k+1} forces agreement on 0..k.
PropertyResult l1_closeness_forces_agreement(const std::vector<double>& gammas, std::size_t max_preamble,
                                             std::size_t max_period, std::size_t extra_k);
PropertyResult l1_to_dE_continuity(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult dE_to_sup_continuity(const std::vector<double>& gammas, Rng& rng, std::size_t trials);

PropertyResult commuting_square(const std::vector<double>& gammas, Rng& rng, std::size_t trials,
                                std::size_t window);
PropertyResult iota_isometry(Rng& rng, std::size_t trials);
PropertyResult translation_inverse(Rng& rng, std::size_t trials);
PropertyResult translation_isometry(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult no_isolated_points(const std::vector<double>& gammas, Rng& rng, std::size_t trials);

PropertyResult periodic_density_EF(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult transitivity(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult orbit_prefix(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult two_coefficient_values(Rng& rng, std::size_t trials);
PropertyResult ef_approximation_property(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult filtration_nesting(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult periodic_density_full_space(const std::vector<double>& gammas, Rng& rng, std::size_t trials);
PropertyResult sensitivity(const std::vector<double>& gammas, Rng& rng, std::size_t random_targets,
                           const std::vector<double>& betas, const std::vector<double>& epsilons);

struct VerifyConfig {
  std::string suite = "all";  // tailmath, coeffspace, metrics, conjugacy, constructions, all
  std::vector<double> gammas;  // empty: suite defaults
  std::uint64_t seed = 42;
  std::size_t trials = 100;
  unsigned k_max = 60;
};

// Runs the selected suites in a fixed order, reporting each result as it
// completes. ConfigError for an unknown suite or invalid gamma.
std::vector<PropertyResult> run_verify(const VerifyConfig& config,
                                       const std::function<void(const PropertyResult&)>& on_result = {});

}  // namespace chaoslab

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "chaoslab/conjugacy.hpp"
#include "chaoslab/constructions.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/metrics.hpp"
#include "chaoslab/tailmath.hpp"
#include "chaoslab/verify.hpp"
#include "oracle.hpp"

using namespace chaoslab;
using oracle::Real;

namespace {

// Pinned tolerances and limits.
constexpr double kTailSeconds = 5.0;
constexpr double kSeparationSeconds = 60.0;
constexpr double kConstructionSeconds = 120.0;
constexpr double kXiWidth = 1e-12;
constexpr double kIsometryWidth = 1e-12;
constexpr double kMetricWidth = 1e-9;
constexpr double kWorkedCloseBound = 0.315;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Folds property results into one outcome, naming the first failure.
void absorb(Outcome& out, const PropertyResult& r) {
  out.detail += (out.detail.empty() ? "" : ", ") + r.property + "=" + std::to_string(r.checked);
  if (!r.pass) {
    if (out.pass) out.detail += " FAILED " + r.counterexample.dump();
    out.pass = false;
  }
}

const Alphabet& binary() {
  static const Alphabet F({Rational(0), Rational(1)});
  return F;
}

Outcome tail_suite() {
  const std::vector<double> gammas{0.25, 0.5, 1.0, 2.0, 5.0};
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  absorb(out, tail_monotonicity(gammas, 60));
  absorb(out, xi_threshold(gammas, 100));
  absorb(out, alpha_positivity(60));
  const double s = seconds_since(t0);
  out.detail += ", " + std::to_string(s) + " s";
  if (s >= kTailSeconds) out.pass = false;
  return out;
}

Outcome xi_fixed_point() {
  const Real target = 3 - exp(Real(1));
  const BoundInterval x1 = xi(1.0, 1), x2 = xi(1.0, 2);
  Outcome out;
  out.pass = oracle::inside(x1, target) && oracle::inside(x2, target) && x1.width() < kXiWidth &&
             x2.width() < kXiWidth && x1.overlaps(x2);
  char buf[160];
  std::snprintf(buf, sizeof buf, "xi1 width %.3g, xi2 width %.3g", x1.width(), x2.width());
  out.detail = buf;
  return out;
}

Outcome l1_separation() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  absorb(out, l1_closeness_forces_agreement({0.5, 1.0, 2.0}, 6, 2, 4));
  const double s = seconds_since(t0);
  out.detail += ", " + std::to_string(s) + " s";
  if (s >= kSeparationSeconds) out.pass = false;
  return out;
}

Outcome agreement_chains() {
  Outcome out;
  absorb(out, agreement_bounds_dE(6, 2, 8));
  absorb(out, small_dE_forces_agreement(6, 2, 8));
  absorb(out, agreement_bounds_sup({binary()}, {0.5, 1.0, 2.0}, 6, 2));
  // Three-letter alphabets on a shorter preamble keep the pair count near the
  // binary family's.
  absorb(out, agreement_bounds_sup({Alphabet({Rational(0), Rational(1), Rational(2)}),
                                    Alphabet({Rational(-1), Rational(0), Rational(1)})},
                                   {0.5, 1.0, 2.0}, 4, 2));
  return out;
}

Outcome conjugacy() {
  Rng rng(kSeed);
  Outcome out;
  absorb(out, commuting_square({0.5, 1.0, 2.0}, rng, 500, 128));
  absorb(out, iota_isometry(rng, 500));
  // Both checks above already require widths below kIsometryWidth.
  (void)kIsometryWidth;
  return out;
}

Outcome holder() {
  Rng rng(kSeed + 1);
  Outcome out;
  absorb(out, holder_inequality({0.5, 1.0, 2.0}, rng, 200));
  return out;
}

Outcome chaos_constructions() {
  Rng rng(kSeed + 2);
  const std::vector<double> gammas{0.5, 1.0, 2.0};
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  absorb(out, periodic_density_EF(gammas, rng, 100));
  absorb(out, transitivity(gammas, rng, 100));
  absorb(out, ef_approximation_property(gammas, rng, 100));
  absorb(out, periodic_density_full_space(gammas, rng, 100));
  const double s = seconds_since(t0);
  out.detail += ", " + std::to_string(s) + " s";
  if (s >= kConstructionSeconds) out.pass = false;
  return out;
}

Outcome sensitive_dependence() {
  Rng rng(kSeed + 3);
  Outcome out;
  absorb(out, sensitivity({1.0, 2.0}, rng, 20, {1.0, 10.0, 1e4}, {0.5, 0.01}));
  const SensitivityWitness w = sensitivity_witness(SeriesFn(CoeffSeq::zero(), 1.0), 1.0, 0.5);
  const bool chain = w.n == 4 && w.close.hi() <= kWorkedCloseBound && w.far.lo() > 1.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, ", worked case n=%s close.hi=%.6f far.lo=%.6f", index_to_string(w.n).c_str(),
                w.close.hi(), w.far.lo());
  out.detail += buf;
  out.pass = out.pass && chain;
  return out;
}

Outcome translation() {
  Rng rng(kSeed + 4);
  Outcome out;
  absorb(out, translation_isometry({0.5, 1.0, 2.0}, rng, 50));
  absorb(out, translation_inverse(rng, 50));
  return out;
}

Outcome metric_sanity() {
  const SeriesFn e(CoeffSeq::constant(Rational(1)), 1.0), zero(CoeffSeq::zero(), 1.0);
  const BoundInterval r1 = rho_p(e, zero, {1.0, 1.0}, kMetricWidth / 2);
  const BoundInterval rinf = rho_p(e, zero, LpSpec::sup(1.0), kMetricWidth / 2);
  const Real euler = exp(Real(1));
  Outcome out;
  out.pass = oracle::inside(r1, euler - 1) && oracle::inside(rinf, euler) && r1.width() < kMetricWidth &&
             rinf.width() < kMetricWidth;
  char buf[200];
  std::snprintf(buf, sizeof buf, "rho_1=[%.12f, %.12f] rho_inf=[%.12f, %.12f]", r1.lo(), r1.hi(), rinf.lo(),
                rinf.hi());
  out.detail = buf;
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"tail sequences: monotone, xi positive past threshold, alpha positive", tail_suite},
      {"xi_1 = xi_2 = 3 - e at gamma 1", xi_fixed_point},
      {"l1 closeness forces prefix agreement (brute force)", l1_separation},
      {"agreement, d_E and sup-distance implications (brute force)", agreement_chains},
      {"shift/derivative conjugacy and isometry", conjugacy},
      {"Lp norm nesting on random polynomials", holder},
      {"periodic density, transitivity and finite-alphabet approximation", chaos_constructions},
      {"sensitive dependence witnesses", sensitive_dependence},
      {"translation isometry and inverse", translation},
      {"rho_1 and rho_inf of e^x on [0, 1]", metric_sanity},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

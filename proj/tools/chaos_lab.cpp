// chaos-lab: command-line front end for the rigorous shift/derivative toolkit.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chaoslab/conjugacy.hpp"
#include "chaoslab/constructions.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/metrics.hpp"
#include "chaoslab/serialization.hpp"
#include "chaoslab/tailmath.hpp"
#include "chaoslab/verify.hpp"

using namespace chaoslab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitCertification = 4;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Alphabet parse_alphabet(const std::string& text) {
  std::vector<Rational> v;
  for (const auto& item : split(text, ',')) v.push_back(parse_rational(item));
  if (v.empty()) throw ConfigError("alphabet must not be empty");
  try {
    return Alphabet(std::move(v));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be positive and finite");
}

void check_eps(double eps, const char* name) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError(std::string(name) + " must be positive");
}

LpSpec make_spec(const std::string& p, double gamma) {
  check_gamma(gamma);
  LpSpec spec{parse_exponent(p), gamma};
  spec.validate();
  return spec;
}

// Loads a function file; --gamma overrides any gamma stored in the file.
SeriesFn load_function(const std::string& path, double gamma) {
  const SeriesFn f = seriesfn_from_json(read_json_file(path), gamma);
  return SeriesFn(f.coeffs(), gamma, f.origin());
}

// CHAOS_LAB_PRECISION sets the tail-series cutoff in bits (clamped to
// 16..60 by the library); reject values that are not numbers at all.
void check_precision_env() {
  const char* bits = std::getenv("CHAOS_LAB_PRECISION");
  if (bits == nullptr) return;
  char* end = nullptr;
  const long v = std::strtol(bits, &end, 10);
  if (end == bits || *end != '\0' || v <= 0) throw ConfigError("CHAOS_LAB_PRECISION must be a positive integer");
}

struct Options {
  double gamma = 1.0;
  std::string p = "inf";
  double eps = 0.1;
  double beta = 1.0;
  std::uint64_t seed = 42;
  std::size_t trials = 100;
  unsigned k_max = 60;
  std::size_t steps = 5;
  std::size_t prefix_len = 10;
  std::size_t trace = 0;
  std::size_t window = 128;
  double tol = 1e-9;
  double eps_u = 0.0, eps_v = 0.0;
  std::string f, g, u, v, target, approximant, alphabet, suite = "all", out;
  std::vector<std::string> files;
  std::string gammas;
};

int cmd_tails(const Options& o) {
  check_gamma(o.gamma);
  std::cout << "k,eta_lo,eta_hi,zeta_lo,zeta_hi,xi_lo,xi_hi\n";
  for (unsigned k = 1; k <= o.k_max; ++k) {
    const BoundInterval e = eta(k), z = zeta(o.gamma, k), x = xi(o.gamma, k);
    std::cout << k << ',' << fmt(e.lo()) << ',' << fmt(e.hi()) << ',' << fmt(z.lo()) << ',' << fmt(z.hi()) << ','
              << fmt(x.lo()) << ',' << fmt(x.hi()) << '\n';
  }
  return 0;
}

int cmd_metric(const Options& o) {
  if (o.files.size() != 2) throw ConfigError("metric needs two function files");
  check_eps(o.tol, "tol");
  const LpSpec spec = make_spec(o.p, o.gamma);
  const BoundInterval r = rho_p(load_function(o.files[0], o.gamma), load_function(o.files[1], o.gamma), spec, o.tol);
  print(Json{{"lo", r.lo()}, {"hi", r.hi()}, {"tol_requested", o.tol}});
  return 0;
}

int cmd_conjugacy(const Options& o) {
  check_gamma(o.gamma);
  Rng rng(o.seed);
  const Alphabet F({Rational(0), Rational(1)});
  Json failures = Json::array();
  for (std::size_t t = 0; t < o.trials; ++t) {
    const CoeffSeq a = random_periodic(rng, F, 8, 6);
    const CoeffSeq b = random_periodic(rng, F, 8, 6);
    const SquareReport r = check_commuting_square(a, o.gamma, o.window, b);
    if (!r.pass) {
      Json j{{"trial", t}, {"a", to_json(a)}, {"b", to_json(b)}, {"tail_kind_match", r.tail_kind_match},
             {"isometry_ok", r.isometry_ok}};
      j["violated"] = r.violated_indices;
      failures.push_back(std::move(j));
    }
  }
  print(Json{{"trials", o.trials}, {"failures", failures}});
  return failures.empty() ? 0 : 1;
}

// Default alphabet: the values taken by the sequences, padded with 0 and 1
// until it has two letters.
Alphabet default_alphabet(const std::vector<const CoeffSeq*>& seqs) {
  std::vector<Rational> v;
  for (const CoeffSeq* s : seqs) {
    for (const Rational& q : s->values_from(0)) v.push_back(q);
  }
  Alphabet F = Alphabet::distinct(v);
  for (int pad : {0, 1}) {
    if (F.size() < 2) F = F.merged_with(Alphabet({Rational(pad)}));
  }
  return F;
}

Alphabet alphabet_or_values(const Options& o, const CoeffSeq& s) {
  return o.alphabet.empty() ? default_alphabet({&s}) : parse_alphabet(o.alphabet);
}

// Integers print without a denominator.
std::string plain(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : to_string(q);
}

int cmd_approx_periodic(const Options& o) {
  check_eps(o.eps, "eps");
  const LpSpec spec = make_spec(o.p, o.gamma);
  const SeriesFn f = load_function(o.f, o.gamma);
  const Alphabet F = alphabet_or_values(o, f.coeffs());
  const PeriodicApprox r = periodic_approx_in_EF(f.coeffs(), F, spec, o.eps);
  print(Json{{"g", to_json(r.g)}, {"N", r.N}, {"distance", to_json(r.distance)}});
  return 0;
}

int cmd_dense_orbit(const Options& o) {
  const Alphabet F = parse_alphabet(o.alphabet.empty() ? "0,1" : o.alphabet);
  const CoeffSeq b = dense_orbit_point(F);
  if (o.target.empty()) {
    const auto prefix = b.prefix(o.prefix_len);
    for (std::size_t i = 0; i < prefix.size(); ++i) std::cout << (i ? "," : "") << plain(prefix[i]);
    std::cout << '\n';
    return 0;
  }
  check_eps(o.eps, "eps");
  const LpSpec spec = make_spec(o.p, o.gamma);
  const SeriesFn target = load_function(o.target, o.gamma);
  if (o.trace > 0) {
    // Distance from the target along the first `trace` points of the orbit.
    std::cout << "n,rho_lo,rho_hi\n";
    for (std::size_t n = 0; n < o.trace; ++n) {
      const BoundInterval r = rho_p(SeriesFn(b.shift(n), o.gamma), target, spec, o.tol);
      std::cout << n << ',' << fmt(r.lo()) << ',' << fmt(r.hi()) << '\n';
    }
    return 0;
  }
  const OrbitHit hit = orbit_search(b, target.coeffs(), F, spec, o.eps);
  print(Json{{"l", index_to_string(hit.l)}, {"N", hit.N}, {"distance", to_json(hit.distance)}});
  return 0;
}

int cmd_transitivity(const Options& o) {
  const double eu = o.eps_u > 0 ? o.eps_u : o.eps, ev = o.eps_v > 0 ? o.eps_v : o.eps;
  check_eps(eu, "eps-u");
  check_eps(ev, "eps-v");
  const LpSpec spec = make_spec(o.p, o.gamma);
  const SeriesFn u = load_function(o.u, o.gamma), v = load_function(o.v, o.gamma);
  const Alphabet F =
      o.alphabet.empty() ? default_alphabet({&u.coeffs(), &v.coeffs()}) : parse_alphabet(o.alphabet);
  const TransitivityWitness w = transitivity_witness(u.coeffs(), v.coeffs(), eu, ev, F, spec);
  print(Json{{"h", to_json(w.h)},
             {"n", index_to_string(w.n)},
             {"distance_u", to_json(w.distance_u)},
             {"distance_v", to_json(w.distance_v)}});
  return 0;
}

int cmd_ef_approx(const Options& o) {
  check_eps(o.eps, "eps");
  const LpSpec spec = make_spec(o.p, o.gamma);
  const SeriesFn f = load_function(o.f, o.gamma);
  const EFApproximation r = f.coeffs().kind() == TailKind::FiniteSupport
                                ? ef_approximation(Polynomial(f.coeffs().preamble()), spec, o.eps)
                                : ef_approximation(f, spec, o.eps);
  print(Json{{"alphabet", to_json(r.F)}, {"member", to_json(r.member)}, {"distance", to_json(r.distance)}});
  return 0;
}

int cmd_filtration(const Options& o) {
  if (o.steps == 0) throw ConfigError("steps must be positive");
  const LpSpec spec = make_spec(o.p, o.gamma);
  const SeriesFn f = load_function(o.f, o.gamma);
  Json steps = Json::array();
  std::size_t n = 1;
  for (const FiltrationStep& s : filtration(f, spec, o.steps)) {
    steps.push_back(Json{{"n", n++}, {"alphabet", to_json(s.F)}, {"member", to_json(s.member)},
                         {"distance", to_json(s.distance)}});
  }
  print(steps);
  return 0;
}

int cmd_sensitivity(const Options& o) {
  check_eps(o.eps, "eps");
  check_eps(o.beta, "beta");
  check_gamma(o.gamma);
  const SeriesFn f = load_function(o.f, o.gamma);
  std::optional<Polynomial> P;
  if (!o.approximant.empty()) P = polynomial_from_json(read_json_file(o.approximant));
  const SensitivityWitness w = sensitivity_witness(f, o.beta, o.eps, P);
  print(Json{{"g", to_json(w.g)},
             {"n", index_to_string(w.n)},
             {"beta", w.beta},
             {"eps", w.eps},
             {"P", to_json(w.P.as_sequence())},
             {"c", to_string(w.c)},
             {"M", to_string(w.M)},
             {"close", to_json(w.close)},
             {"far", to_json(w.far)}});
  return 0;
}

int cmd_verify(const Options& o) {
  VerifyConfig config;
  config.suite = o.suite;
  config.seed = o.seed;
  config.trials = o.trials;
  config.k_max = o.k_max;
  for (const auto& item : split(o.gammas, ',')) {
    char* end = nullptr;
    const double g = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') throw ConfigError("bad gamma '" + item + "'");
    config.gammas.push_back(g);
  }
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw ConfigError("cannot write " + o.out);
  }
  std::ostream& os = o.out.empty() ? std::cout : file;
  bool all_pass = true;
  run_verify(config, [&](const PropertyResult& r) {
    all_pass = all_pass && r.pass;
    os << to_json(r).dump() << '\n' << std::flush;
  });
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified experiments with the derivative as a shift on Taylor coefficients"};
  app.require_subcommand(1);
  Options o;

  auto gamma = [&](CLI::App* c) { c->add_option("--gamma", o.gamma, "Interval length (domain [0, gamma])"); };
  auto exponent = [&](CLI::App* c) { c->add_option("--p", o.p, "Lp exponent in [1, inf]"); };
  auto eps = [&](CLI::App* c) { c->add_option("--eps", o.eps, "Target distance"); };
  auto tol = [&](CLI::App* c) { c->add_option("--tol", o.tol, "Enclosure width target"); };

  auto* tails = app.add_subcommand("tails", "Tail enclosures eta, zeta, xi as CSV");
  gamma(tails);
  tails->add_option("--k-max", o.k_max, "Last index");

  auto* metric = app.add_subcommand("metric", "Certified Lp distance between two functions");
  gamma(metric);
  exponent(metric);
  tol(metric);
  metric->add_option("files", o.files, "Two function JSON files")->required()->expected(2);

  auto* conj = app.add_subcommand("conjugacy-check", "Random commuting-square checks");
  gamma(conj);
  conj->add_option("--trials", o.trials);
  conj->add_option("--seed", o.seed);
  conj->add_option("--window", o.window);

  auto* approx = app.add_subcommand("approx-periodic", "Periodic point near f in E_F");
  gamma(approx);
  exponent(approx);
  eps(approx);
  approx->add_option("--f", o.f, "Function JSON")->required();
  approx->add_option("--alphabet", o.alphabet, "Comma-separated rationals (default: values of f)");

  auto* orbit = app.add_subcommand("dense-orbit", "Word-enumeration orbit point and orbit search");
  orbit->add_option("--alphabet", o.alphabet, "Comma-separated rationals");
  orbit->add_option("--prefix-len", o.prefix_len, "Coefficients to print");
  orbit->add_option("--target", o.target, "Target JSON: report the shift that approaches it");
  orbit->add_option("--trace", o.trace, "With --target: CSV of distances along the first n orbit points");
  gamma(orbit);
  exponent(orbit);
  eps(orbit);
  tol(orbit);

  auto* trans = app.add_subcommand("transitivity", "Point near u whose orbit comes near v");
  gamma(trans);
  exponent(trans);
  eps(trans);
  trans->add_option("--u", o.u)->required();
  trans->add_option("--v", o.v)->required();
  trans->add_option("--eps-u", o.eps_u, "Overrides --eps for u");
  trans->add_option("--eps-v", o.eps_v, "Overrides --eps for v");
  trans->add_option("--alphabet", o.alphabet);

  auto* ef = app.add_subcommand("ef-approx", "Finite-alphabet approximation of f");
  gamma(ef);
  exponent(ef);
  eps(ef);
  ef->add_option("--f", o.f)->required();

  auto* filt = app.add_subcommand("filtration", "Nested alphabets approximating f within 1/n");
  gamma(filt);
  exponent(filt);
  filt->add_option("--f", o.f)->required();
  filt->add_option("--steps", o.steps);

  auto* sens = app.add_subcommand("sensitivity", "Sensitive-dependence witness");
  gamma(sens);
  eps(sens);
  sens->add_option("--beta", o.beta);
  sens->add_option("--f", o.f)->required();
  sens->add_option("--approximant", o.approximant, "Polynomial JSON used instead of the Taylor truncation");

  auto* verify = app.add_subcommand("verify", "Property suites as JSON lines");
  verify->add_option("--suite", o.suite, "tailmath, coeffspace, metrics, conjugacy, constructions or all");
  verify->add_option("--gamma", o.gammas, "Comma-separated gammas (default per suite)");
  verify->add_option("--seed", o.seed);
  verify->add_option("--trials", o.trials);
  verify->add_option("--k-max", o.k_max);
  verify->add_option("--out", o.out, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    check_precision_env();
    if (*tails) return cmd_tails(o);
    if (*metric) return cmd_metric(o);
    if (*conj) return cmd_conjugacy(o);
    if (*approx) return cmd_approx_periodic(o);
    if (*orbit) return cmd_dense_orbit(o);
    if (*trans) return cmd_transitivity(o);
    if (*ef) return cmd_ef_approx(o);
    if (*filt) return cmd_filtration(o);
    if (*sens) return cmd_sensitivity(o);
    if (*verify) return cmd_verify(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfeasibleTolerance& e) {
    std::cerr << "infeasible tolerance: " << e.what() << '\n';
    return kExitTolerance;
  } catch (const ToleranceUnreachable& e) {
    std::cerr << "tolerance unreachable: " << e.what() << '\n';
    return kExitTolerance;
  } catch (const CertificationFailure& e) {
    std::cerr << "certification failure: " << e.what() << '\n';
    return kExitCertification;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

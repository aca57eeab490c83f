#include "chaoslab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "chaoslab/conjugacy.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/metrics.hpp"
#include "chaoslab/tailmath.hpp"

namespace chaoslab {

// ---------------------------------------------------------------- randomness

std::size_t Rng::below(std::size_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return static_cast<std::size_t>(x % n);
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Rational Rng::small_rational(int max_num) {
  const int p = static_cast<int>(below(2 * static_cast<std::size_t>(max_num) + 1)) - max_num;
  static constexpr int kDenominators[] = {1, 2, 4};
  Rational q(p, kDenominators[below(3)]);
  q.canonicalize();
  return q;
}

namespace {

std::vector<Rational> random_word(Rng& rng, const Alphabet& F, std::size_t length) {
  std::vector<Rational> w;
  for (std::size_t i = 0; i < length; ++i) w.push_back(F[rng.below(F.size())]);
  return w;
}

}  // namespace

CoeffSeq random_periodic(Rng& rng, const Alphabet& F, std::size_t max_preamble, std::size_t max_period) {
  auto pre = random_word(rng, F, rng.below(max_preamble + 1));
  auto per = random_word(rng, F, 1 + rng.below(std::max<std::size_t>(max_period, 1)));
  return CoeffSeq::periodic(std::move(pre), std::move(per));
}

CoeffSeq random_finite(Rng& rng, const Alphabet& F, std::size_t max_length) {
  return CoeffSeq::finite(random_word(rng, F, rng.below(max_length + 1)));
}

Polynomial random_polynomial(Rng& rng, std::size_t max_degree) {
  std::vector<Rational> p;
  const std::size_t n = rng.below(max_degree + 1);
  for (std::size_t i = 0; i <= n; ++i) p.push_back(rng.small_rational());
  return Polynomial(std::move(p));
}

Alphabet random_alphabet(Rng& rng, std::size_t min_size, std::size_t max_size) {
  const std::size_t want = min_size + rng.below(max_size - min_size + 1);
  std::vector<Rational> v;
  while (v.size() < want) {
    const Rational q = rng.small_rational(4);
    if (std::find(v.begin(), v.end(), q) == v.end()) v.push_back(q);
  }
  return Alphabet(std::move(v));
}

std::vector<CoeffSeq> periodic_family(const Alphabet& F, std::size_t max_preamble, std::size_t max_period) {
  const std::size_t m = F.size();
  auto words_of = [&](std::size_t len) {
    std::vector<std::vector<Rational>> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= m;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Rational> w(len);
      std::size_t c = code;
      for (std::size_t i = len; i-- > 0;) {
        w[i] = F[c % m];
        c /= m;
      }
      out.push_back(std::move(w));
    }
    return out;
  };
  std::vector<CoeffSeq> family;
  std::set<std::string> seen;
  for (std::size_t lp = 0; lp <= max_preamble; ++lp) {
    for (const auto& pre : words_of(lp)) {
      for (std::size_t q = 1; q <= max_period; ++q) {
        for (const auto& per : words_of(q)) {
          CoeffSeq s = CoeffSeq::periodic(pre, per);
          if (seen.insert(to_json(s).dump()).second) family.push_back(std::move(s));
        }
      }
    }
  }
  return family;
}

std::size_t first_disagreement(const CoeffSeq& a, const CoeffSeq& b, std::size_t limit) {
  for (std::size_t n = 0; n < limit; ++n) {
    if (a.coeff(n) != b.coeff(n)) return n;
  }
  return limit;
}

Json to_json(const PropertyResult& r) {
  Json j;
  j["suite"] = r.suite;
  j["property"] = r.property;
  j["pass"] = r.pass;
  j["checked"] = r.checked;
  j["counterexample"] = r.counterexample;
  return j;
}

namespace {

// Collects case outcomes for one property; the first failure is kept.
class Recorder {
 public:
  Recorder(std::string suite, std::string property) {
    r_.suite = std::move(suite);
    r_.property = std::move(property);
  }

  void expect(bool ok, const std::function<Json()>& detail) {
    ++r_.checked;
    if (!ok && r_.pass) {
      r_.pass = false;
      r_.counterexample = detail();
    }
  }

  // Runs one case; library errors count as a failed case.
  template <class Body>
  void guard(const std::function<Json()>& context, Body&& body) {
    try {
      body();
    } catch (const Error& e) {
      expect(false, [&] {
        Json j = context();
        j["error"] = e.what();
        return j;
      });
    }
  }

  PropertyResult done() { return std::move(r_); }

 private:
  PropertyResult r_;
};

bool encloses(const BoundInterval& x, const Rational& q) {
  return from_double(x.lo()) <= q && q <= from_double(x.hi());
}

Rational power(const Rational& base, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= base;
  return r;
}

Json seq_json(const CoeffSeq& s) { return to_json(s); }

double pick(Rng& rng, const std::vector<double>& v) { return v[rng.below(v.size())]; }

LpSpec random_spec(Rng& rng, double gamma) {
  static const std::vector<double> kExponents = {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()};
  return {pick(rng, kExponents), gamma};
}

const Alphabet& binary() {
  static const Alphabet F({Rational(0), Rational(1)});
  return F;
}

// Computes an enclosure at a coarse tolerance first and refines only when
// the coarse answer would refute `holds`.
template <class Compute, class Holds>
bool holds_after_refinement(Compute compute, Holds holds, double scale) {
  for (double tol : {scale * 0.25, scale * 1e-4, std::max(scale * 1e-9, 1e-13)}) {
    if (holds(compute(tol))) return true;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------- tailmath

PropertyResult tail_monotonicity(const std::vector<double>& gammas, unsigned k_max) {
  Recorder rec("tailmath", "tails-strictly-decrease");
  for (unsigned k = 1; k <= k_max; ++k) {
    const BoundInterval e0 = eta(k), e1 = eta(k + 1);
    rec.expect(e0.lo() > e1.hi() && encloses(e0 - e1, inverse_factorial(k)), [&] {
      return Json{{"sequence", "eta"}, {"k", k}, {"eta_k", to_json(e0)}, {"eta_k1", to_json(e1)}};
    });
    for (double g : gammas) {
      const BoundInterval z0 = zeta(g, k), z1 = zeta(g, k + 1);
      const Rational term = power(from_double(g), k) * inverse_factorial(k);
      rec.expect(z0.lo() > z1.hi() && encloses(z0 - z1, term), [&] {
        return Json{{"sequence", "zeta"}, {"gamma", g}, {"k", k}, {"zeta_k", to_json(z0)}, {"zeta_k1", to_json(z1)}};
      });
    }
  }
  return rec.done();
}

PropertyResult tail_vanishing(const std::vector<double>& gammas, unsigned k_max) {
  Recorder rec("tailmath", "tails-vanish");
  for (unsigned k = 40; k <= std::max(k_max, 60U); ++k) {
    rec.expect(eta(k).hi() < 1e-12, [&] { return Json{{"sequence", "eta"}, {"k", k}}; });
    for (double g : gammas) {
      if (g > 5.0) continue;
      const BoundInterval z = zeta(g, k), x = xi(g, k);
      rec.expect(z.hi() < 1e-12 && abs(x).hi() < 1e-12, [&] {
        return Json{{"gamma", g}, {"k", k}, {"zeta", to_json(z)}, {"xi", to_json(x)}};
      });
    }
  }
  return rec.done();
}

PropertyResult xi_threshold(const std::vector<double>& gammas, std::size_t window) {
  Recorder rec("tailmath", "xi-positive-and-decreasing-past-threshold");
  for (double g : gammas) {
    const unsigned N = compute_n_gamma(g);
    const Rational gq = from_double(g);
    for (unsigned k = N; k <= N + window; ++k) {
      const BoundInterval x0 = xi(g, k), x1 = xi(g, k + 1);
      // xi_k - xi_{k+1} = (gamma^k / k!) (1 - 2 gamma / (k+1)), evaluated exactly.
      const Rational gap = power(gq, k) * inverse_factorial(k) * (1 - 2 * gq / (k + 1));
      rec.expect(x0.lo() > 0.0 && sgn(gap) > 0 && x0.hi() >= x1.lo(), [&] {
        return Json{{"gamma", g}, {"k", k}, {"n_gamma", N}, {"xi_k", to_json(x0)}, {"xi_k1", to_json(x1)},
                    {"gap", to_string(gap)}};
      });
    }
  }
  return rec.done();
}

PropertyResult alpha_positivity(unsigned k_max) {
  Recorder rec("tailmath", "alpha-positive");
  for (unsigned k = 1; k <= k_max; ++k) {
    const BoundInterval a = alpha(k);
    rec.expect(a.lo() > 0.0, [&] { return Json{{"k", k}, {"alpha", to_json(a)}}; });
  }
  return rec.done();
}

PropertyResult enclosure_nesting(const std::vector<double>& gammas, unsigned k_max) {
  Recorder rec("tailmath", "longer-sums-stay-inside");
  for (unsigned k : {1U, 2U, 3U, 5U, 10U, 20U, 40U, 60U}) {
    if (k > k_max) continue;
    const BoundInterval coarse = eta(k), fine = eta(k, k + 80);
    rec.expect(coarse.contains(fine), [&] {
      return Json{{"sequence", "eta"}, {"k", k}, {"coarse", to_json(coarse)}, {"fine", to_json(fine)}};
    });
    for (double g : gammas) {
      const BoundInterval zc = zeta(g, k), zf = zeta(g, k, k + 80 + static_cast<unsigned>(4 * g));
      rec.expect(zc.contains(zf), [&] {
        return Json{{"sequence", "zeta"}, {"gamma", g}, {"k", k}, {"coarse", to_json(zc)}, {"fine", to_json(zf)}};
      });
    }
  }
  return rec.done();
}

// ---------------------------------------------------------------- coeffspace

PropertyResult shift_derivative_coherence(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("coeffspace", "shift-matches-difference-quotient");
  const double h = 0x1.0p-20;
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const Alphabet F = random_alphabet(rng, 2, 3);
    const SeriesFn f(random_periodic(rng, F, 3, 3), g);
    const SeriesFn df = differentiate(f);
    const double second = derivative_sup_bound(df);
    for (int i = 0; i <= 4; ++i) {
      const double x = std::floor((g - h) * i / 4 * 0x1.0p20) * 0x1.0p-20;
      rec.guard([&] { return Json{{"f", to_json(f)}, {"x", x}}; }, [&] {
        const BoundInterval d = evaluate(df, x, 1e-13);
        const BoundInterval q = (evaluate(f, x + h, 1e-13) - evaluate(f, x, 1e-13)) / BoundInterval(h);
        const BoundInterval gap = abs(d - q);
        rec.expect(gap.lo() <= (BoundInterval(second) * BoundInterval(h)).hi(), [&] {
          return Json{{"f", to_json(f)}, {"x", x}, {"derivative", to_json(d)}, {"quotient", to_json(q)}};
        });
      });
    }
  }
  return rec.done();
}

PropertyResult periodic_shift_return(Rng& rng, std::size_t trials) {
  Recorder rec("coeffspace", "period-shift-returns");
  for (std::size_t t = 0; t < trials; ++t) {
    const Alphabet F = random_alphabet(rng, 1, 3);
    const std::size_t q = 1 + rng.below(6);
    const CoeffSeq s = CoeffSeq::periodic({}, random_word(rng, F, q));
    rec.expect(s.shift(q) == s, [&] { return Json{{"sequence", seq_json(s)}, {"q", q}}; });
  }
  return rec.done();
}

PropertyResult word_enumeration_completeness(std::size_t max_alphabet, std::size_t max_word) {
  Recorder rec("coeffspace", "enumeration-contains-every-short-word");
  for (std::size_t m = 1; m <= max_alphabet; ++m) {
    std::vector<Rational> letters;
    for (std::size_t i = 0; i < m; ++i) letters.emplace_back(static_cast<long>(i));
    const Alphabet F(letters);
    // Words of length <= max_word all start before the next length block.
    std::size_t bound = 0, power = 1;
    for (std::size_t j = 1; j <= max_word; ++j) {
      power *= m;
      bound += j * power;
    }
    const CoeffSeq b = dense_orbit_point(F);
    const auto prefix = b.prefix(bound + max_word);
    for (std::size_t len = 1; len <= max_word; ++len) {
      std::size_t count = 1;
      for (std::size_t i = 0; i < len; ++i) count *= m;
      for (std::size_t code = 0; code < count; ++code) {
        std::vector<Rational> w(len);
        for (std::size_t i = len, c = code; i-- > 0; c /= m) w[i] = F[c % m];
        std::size_t found = bound + 1;
        for (std::size_t l = 0; l <= bound && found > bound; ++l) {
          if (std::equal(w.begin(), w.end(), prefix.begin() + static_cast<std::ptrdiff_t>(l))) found = l;
        }
        const Index pos = word_position(F, w);
        const bool closed_form_ok = pos <= bound && b.shift(pos).prefix(len) == w;
        rec.expect(found <= bound && closed_form_ok, [&] {
          return Json{{"alphabet", to_json(F)}, {"word", to_json(Alphabet::distinct(w))}, {"length", len},
                      {"code", code}, {"closed_form", index_to_string(pos)}};
        });
      }
    }
  }
  return rec.done();
}

PropertyResult membership_shift_invariance(Rng& rng, std::size_t trials) {
  Recorder rec("coeffspace", "membership-survives-shift");
  for (std::size_t t = 0; t < trials; ++t) {
    const Alphabet F = random_alphabet(rng, 2, 4);
    CoeffSeq s = CoeffSeq::zero();
    switch (t % 3) {
      case 0: s = random_periodic(rng, F, 5, 4); break;
      case 1: s = random_finite(rng, F, 8); break;
      default: s = CoeffSeq::word_enumeration(F, rng.below(1000)); break;
    }
    // Finite support always contains 0, which F may lack.
    const Alphabet G = s.kind() == TailKind::FiniteSupport ? F.merged_with(Alphabet({Rational(0)})) : F;
    const std::size_t k = rng.below(20);
    rec.expect(s.in_EF(G) && s.shift(k).in_EF(G), [&] {
      return Json{{"sequence", seq_json(s)}, {"alphabet", to_json(G)}, {"shift", k}};
    });
  }
  return rec.done();
}

PropertyResult json_round_trip(Rng& rng, std::size_t trials) {
  Recorder rec("coeffspace", "json-round-trip");
  for (std::size_t t = 0; t < trials; ++t) {
    const Alphabet F = random_alphabet(rng, 1, 4);
    CoeffSeq s = CoeffSeq::zero();
    switch (t % 4) {
      case 0: s = random_periodic(rng, F, 5, 4); break;
      case 1: s = random_finite(rng, F, 8); break;
      case 2: s = CoeffSeq::word_enumeration(F, rng.next()); break;
      default: s = CoeffSeq::word_enumeration(F, (static_cast<Index>(rng.next()) << 64) | rng.next()); break;
    }
    const SeriesFn f(s, rng.uniform(0.1, 6.0), rng.coin() ? 0.0 : rng.uniform(-10.0, 10.0));
    const std::string text = to_json(f).dump();
    rec.guard([&] { return Json{{"text", text}}; }, [&] {
      const SeriesFn back = seriesfn_from_json(Json::parse(text));
      rec.expect(back == f && to_json(back).dump() == text, [&] { return Json{{"text", text}}; });
    });
  }
  return rec.done();
}

// ---------------------------------------------------------------- metrics

PropertyResult metric_axioms(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("metrics", "symmetry-and-triangle");
  for (std::size_t t = 0; t < trials; ++t) {
    const CoeffSeq x = random_periodic(rng, binary(), 4, 3);
    const CoeffSeq y = random_periodic(rng, binary(), 4, 3);
    const CoeffSeq z = random_periodic(rng, binary(), 4, 3);
    auto axioms = [&](const char* name, auto d) {
      const BoundInterval xy = d(x, y), yx = d(y, x), yz = d(y, z), xz = d(x, z), xx = d(x, x);
      rec.expect(xy.overlaps(yx) && xz.lo() <= (xy + yz).hi() && xx.hi() == 0.0, [&] {
        return Json{{"metric", name}, {"x", seq_json(x)}, {"y", seq_json(y)}, {"z", seq_json(z)}};
      });
    };
    axioms("d_lambda", [](const CoeffSeq& a, const CoeffSeq& b) { return d_lambda(a, b); });
    axioms("d_E", [](const CoeffSeq& a, const CoeffSeq& b) { return d_E(a, b); });
    const double g = pick(rng, gammas);
    const LpSpec spec = random_spec(rng, g);
    rec.guard([&] { return Json{{"metric", "rho_p"}, {"p", exponent_to_string(spec.p)}, {"gamma", g}}; }, [&] {
      axioms("rho_p", [&](const CoeffSeq& a, const CoeffSeq& b) {
        return rho_p(SeriesFn(a, g), SeriesFn(b, g), spec, 1e-9);
      });
    });
  }
  return rec.done();
}

PropertyResult holder_inequality(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("metrics", "lp-norms-nest");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const Polynomial P = random_polynomial(rng, 6);
    const double p = rng.coin() ? 1.0 : 1.0 + std::floor(rng.uniform(0.0, 3.0) * 4) / 4;
    const double q = rng.coin() ? std::numeric_limits<double>::infinity() : p + 0.25 + std::floor(rng.uniform(0.0, 3.0) * 4) / 4;
    const SeriesFn f = P.as_function(g);
    rec.guard([&] { return Json{{"f", to_json(f)}, {"p", p}, {"q", exponent_to_string(q)}}; }, [&] {
      const auto [lhs, rhs] = holder_compare(f, p, q, 1e-9);
      rec.expect(lhs.lo() <= rhs.hi(), [&] {
        return Json{{"f", to_json(f)}, {"p", p}, {"q", exponent_to_string(q)}, {"lhs", to_json(lhs)}, {"rhs", to_json(rhs)}};
      });
    });
  }
  return rec.done();
}

PropertyResult agreement_bounds_dE(std::size_t max_preamble, std::size_t max_period, std::size_t k_max) {
  Recorder rec("metrics", "prefix-agreement-bounds-d_E");
  const auto family = periodic_family(binary(), max_preamble, max_period);
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const std::size_t first = first_disagreement(family[i], family[j], 64);
      if (first < 2) continue;  // needs agreement on 0..k with k >= 1
      const BoundInterval d = d_E(family[i], family[j]);
      for (std::size_t k = 1; k < first && k <= k_max; ++k) {
        const BoundInterval bound = eta(static_cast<unsigned>(k + 2));
        rec.expect(d.lo() <= bound.hi(), [&] {
          return Json{{"f", seq_json(family[i])}, {"g", seq_json(family[j])}, {"k", k}, {"d_E", to_json(d)}};
        });
      }
    }
  }
  return rec.done();
}

PropertyResult small_dE_forces_agreement(std::size_t max_preamble, std::size_t max_period, std::size_t k_max) {
  Recorder rec("metrics", "small-d_E-forces-prefix-agreement");
  const auto family = periodic_family(binary(), max_preamble, max_period);
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const std::size_t first = first_disagreement(family[i], family[j], 64);
      const BoundInterval d = d_E(family[i], family[j]);
      const Rational d_hi = from_double(d.hi());
      for (std::size_t k = 1; k <= k_max; ++k) {
        const bool premise = d_hi < inverse_factorial(static_cast<unsigned>(k + 1));
        rec.expect(!premise || first > k, [&] {
          return Json{{"f", seq_json(family[i])}, {"g", seq_json(family[j])}, {"k", k}, {"d_E", to_json(d)}};
        });
      }
    }
  }
  return rec.done();
}

PropertyResult agreement_bounds_sup(const std::vector<Alphabet>& alphabets, const std::vector<double>& gammas,
                                    std::size_t max_preamble, std::size_t max_period) {
  Recorder rec("metrics", "prefix-agreement-bounds-sup-distance");
  for (const Alphabet& F : alphabets) {
    const auto family = periodic_family(F, max_preamble, max_period);
    for (double g : gammas) {
      const auto tails = shared_tails(g);
      const LpSpec sup = LpSpec::sup(g);
      for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
          const std::size_t first = first_disagreement(family[i], family[j], 64);
          if (first < 2) continue;
          const std::size_t k = std::min<std::size_t>(first - 1, 20);
          const double bound = (enclose(F.diameter()) * tails->zeta(static_cast<unsigned>(k + 1))).hi();
          const SeriesFn a(family[i], g), b(family[j], g);
          rec.guard([&] { return Json{{"f", seq_json(family[i])}, {"g", seq_json(family[j])}, {"gamma", g}}; }, [&] {
            const bool ok = holds_after_refinement([&](double tol) { return rho_p(a, b, sup, tol); },
                                                   [&](const BoundInterval& r) { return r.lo() <= bound; }, bound);
            rec.expect(ok, [&] {
              return Json{{"alphabet", to_json(F)}, {"f", seq_json(family[i])}, {"g", seq_json(family[j])},
                          {"gamma", g}, {"k", k}, {"bound", bound}};
            });
          });
        }
      }
    }
  }
  return rec.done();
}

PropertyResult l1_closeness_forces_agreement(const std::vector<double>& gammas, std::size_t max_preamble,
                                             std::size_t max_period, std::size_t extra_k) {
  Recorder rec("metrics", "l1-closeness-forces-prefix-agreement");
  const auto family = periodic_family(binary(), max_preamble, max_period);
  for (double g : gammas) {
    const unsigned M = compute_m_gamma(g);
    std::vector<double> threshold(extra_k + 1);
    for (std::size_t e = 0; e <= extra_k; ++e) threshold[e] = xi(g, M + static_cast<unsigned>(e) + 1).lo();
    const LpSpec l1{1.0, g};
    for (std::size_t i = 0; i < family.size(); ++i) {
      for (std::size_t j = i + 1; j < family.size(); ++j) {
        const std::size_t first = first_disagreement(family[i], family[j], 64);
        if (first > M + extra_k) continue;  // agreement through every tested k
        const std::size_t e0 = first > M ? first - M : 0;
        const SeriesFn a(family[i], g), b(family[j], g);
        rec.guard([&] { return Json{{"f", seq_json(family[i])}, {"g", seq_json(family[j])}, {"gamma", g}}; }, [&] {
          // xi decreases past M, so the smallest tested k carries the largest threshold.
          const double strongest = threshold[e0];
          const bool ok = holds_after_refinement([&](double tol) { return rho_p(a, b, l1, tol); },
                                                 [&](const BoundInterval& r) { return r.hi() >= strongest; },
                                                 strongest);
          for (std::size_t e = e0; e <= extra_k; ++e) {
            rec.expect(ok || threshold[e] < strongest, [&] {
              return Json{{"f", seq_json(family[i])}, {"g", seq_json(family[j])}, {"gamma", g},
                          {"k", M + e}, {"first_disagreement", first}, {"xi_lo", threshold[e]}};
            });
          }
        });
      }
    }
  }
  return rec.done();
}

namespace {

// Sequence agreeing with f on 0..n, followed by a random binary tail.
CoeffSeq splice_random_tail(Rng& rng, const CoeffSeq& f, std::size_t n) {
  const CoeffSeq tail = random_periodic(rng, binary(), 3, 3);
  auto pre = f.prefix(n + 1);
  if (tail.kind() == TailKind::FiniteSupport) {
    auto t = tail.preamble();
    pre.insert(pre.end(), t.begin(), t.end());
    return CoeffSeq::finite(pre);
  }
  pre.insert(pre.end(), tail.preamble().begin(), tail.preamble().end());
  return CoeffSeq::periodic(pre, tail.period());
}

}  // namespace

PropertyResult l1_to_dE_continuity(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("metrics", "l1-closeness-gives-d_E-closeness");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const CoeffSeq f = random_periodic(rng, binary(), 4, 3);
    for (double eps : {1e-1, 1e-3}) {
      unsigned N = compute_m_gamma(g);
      while (eta(N).hi() >= eps) ++N;
      const double delta = xi(g, N + 1).lo();
      const CoeffSeq h = splice_random_tail(rng, f, N + rng.below(4));
      rec.guard([&] { return Json{{"f", seq_json(f)}, {"g", seq_json(h)}, {"gamma", g}, {"eps", eps}}; }, [&] {
        const BoundInterval r = rho_p(SeriesFn(f, g), SeriesFn(h, g), {1.0, g}, delta * 1e-3);
        if (!(r.hi() < delta)) return;  // hypothesis not met
        const BoundInterval d = d_E(f, h);
        rec.expect(d.hi() < eps, [&] {
          return Json{{"f", seq_json(f)}, {"g", seq_json(h)}, {"gamma", g}, {"eps", eps}, {"d_E", to_json(d)}};
        });
      });
    }
  }
  return rec.done();
}

PropertyResult dE_to_sup_continuity(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("metrics", "d_E-closeness-gives-sup-closeness");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const CoeffSeq f = random_periodic(rng, binary(), 4, 3);
    for (double eps : {1e-1, 1e-3}) {
      const unsigned N = first_index_below(g, BoundInterval(1.0), eps);
      const Rational delta = inverse_factorial(N + 1);
      const CoeffSeq h = splice_random_tail(rng, f, N + rng.below(4));
      rec.guard([&] { return Json{{"f", seq_json(f)}, {"g", seq_json(h)}, {"gamma", g}, {"eps", eps}}; }, [&] {
        if (!(from_double(d_E(f, h).hi()) < delta)) return;  // hypothesis not met
        const BoundInterval r = rho_p(SeriesFn(f, g), SeriesFn(h, g), LpSpec::sup(g), eps * 1e-3);
        rec.expect(r.hi() < eps, [&] {
          return Json{{"f", seq_json(f)}, {"g", seq_json(h)}, {"gamma", g}, {"eps", eps}, {"rho_inf", to_json(r)}};
        });
      });
    }
  }
  return rec.done();
}

// ---------------------------------------------------------------- conjugacy

PropertyResult commuting_square(const std::vector<double>& gammas, Rng& rng, std::size_t trials,
                                std::size_t window) {
  Recorder rec("conjugacy", "shift-commutes-with-derivative");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const CoeffSeq a = t % 10 == 9 ? CoeffSeq::word_enumeration(binary(), rng.below(1 << 20))
                                   : random_periodic(rng, binary(), 8, 6);
    const CoeffSeq b = random_periodic(rng, binary(), 8, 6);
    rec.guard([&] { return Json{{"a", seq_json(a)}, {"b", seq_json(b)}}; }, [&] {
      const SquareReport r = check_commuting_square(a, g, window, b);
      const bool tight = r.d_E_value->width() < 1e-12 && r.weighted_value->width() < 1e-12;
      rec.expect(r.pass && tight, [&] {
        Json j{{"a", seq_json(a)}, {"b", seq_json(b)}, {"gamma", g}, {"tail_kind_match", r.tail_kind_match},
               {"d_E", to_json(*r.d_E_value)}, {"weighted", to_json(*r.weighted_value)}};
        j["violated"] = r.violated_indices;
        return j;
      });
    });
  }
  return rec.done();
}

PropertyResult iota_isometry(Rng& rng, std::size_t trials) {
  Recorder rec("conjugacy", "iota-is-an-isometry");
  for (std::size_t t = 0; t < trials; ++t) {
    const CoeffSeq a = random_periodic(rng, binary(), 6, 4);
    const CoeffSeq b = random_periodic(rng, binary(), 6, 4);
    const BoundInterval lhs = d_E(iota_inverse(iota(a, 1.0)), iota_inverse(iota(b, 1.0)));
    const BoundInterval rhs = weighted_product_metric(a, b, factorial_weights());
    rec.expect(lhs.overlaps(rhs) && lhs.width() < 1e-12 && rhs.width() < 1e-12, [&] {
      return Json{{"a", seq_json(a)}, {"b", seq_json(b)}, {"d_E", to_json(lhs)}, {"weighted", to_json(rhs)}};
    });
  }
  return rec.done();
}

PropertyResult translation_inverse(Rng& rng, std::size_t trials) {
  Recorder rec("conjugacy", "translation-inverts");
  for (std::size_t t = 0; t < trials; ++t) {
    const SeriesFn f(random_periodic(rng, random_alphabet(rng, 2, 3), 4, 3), rng.uniform(0.1, 5.0));
    const double a = rng.uniform(-20.0, 20.0);
    const SeriesFn Tf = translate(f, a);
    rec.expect(untranslate(Tf) == f && translate(untranslate(Tf), a) == Tf && Tf.origin() == a, [&] {
      return Json{{"f", to_json(f)}, {"a", a}};
    });
  }
  return rec.done();
}

PropertyResult translation_isometry(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("conjugacy", "translation-is-an-isometry");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const Alphabet F = random_alphabet(rng, 2, 3);
    const SeriesFn f(random_periodic(rng, F, 4, 3), g), h(random_periodic(rng, F, 4, 3), g);
    const double a = rng.uniform(-20.0, 20.0);
    const LpSpec spec = random_spec(rng, g);
    rec.guard([&] { return Json{{"f", to_json(f)}, {"g", to_json(h)}, {"a", a}}; }, [&] {
      const TranslationReport r = check_translation_isometry(f, h, a, spec, 1e-9);
      rec.expect(r.pass, [&] {
        return Json{{"f", to_json(f)}, {"g", to_json(h)}, {"a", a}, {"p", exponent_to_string(spec.p)},
                    {"before", to_json(r.before)}, {"after", to_json(r.after)}};
      });
    });
  }
  return rec.done();
}

PropertyResult no_isolated_points(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("conjugacy", "no-isolated-points");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const SeriesFn f(random_periodic(rng, binary(), 6, 4), g);
    const LpSpec spec = random_spec(rng, g);
    for (double delta : {1e-2, 1e-4}) {
      rec.guard([&] { return Json{{"f", to_json(f)}, {"delta", delta}}; }, [&] {
        const IsolationProbe pr = probe_not_isolated(f, delta, spec);
        rec.expect(pr.pass && pr.neighbour.is_binary(), [&] {
          return Json{{"f", to_json(f)}, {"delta", delta}, {"p", exponent_to_string(spec.p)},
                      {"neighbour", seq_json(pr.neighbour)}, {"distance", to_json(pr.distance)}};
        });
      });
    }
  }
  return rec.done();
}

// ---------------------------------------------------------------- constructions

namespace {

const std::vector<double>& tolerances() {
  static const std::vector<double> v = {0.3, 0.1, 1e-2, 1e-3};
  return v;
}

}  // namespace

PropertyResult periodic_density_EF(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("constructions", "periodic-points-dense-in-E_F");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const Alphabet F = random_alphabet(rng, 2, 4);
    const CoeffSeq f = t % 4 == 3 ? CoeffSeq::word_enumeration(F, rng.below(5000)) : random_periodic(rng, F, 5, 4);
    const LpSpec spec = random_spec(rng, g);
    const double eps = pick(rng, tolerances());
    rec.guard([&] { return Json{{"f", seq_json(f)}, {"alphabet", to_json(F)}, {"eps", eps}}; }, [&] {
      const PeriodicApprox r = periodic_approx_in_EF(f, F, spec, eps);
      rec.expect(r.g.shift(r.N + 1) == r.g && r.distance.hi() < eps && r.g.in_EF(F), [&] {
        return Json{{"f", seq_json(f)}, {"alphabet", to_json(F)}, {"eps", eps}, {"gamma", g},
                    {"p", exponent_to_string(spec.p)}, {"g", seq_json(r.g)}, {"distance", to_json(r.distance)}};
      });
    });
  }
  return rec.done();
}

PropertyResult transitivity(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("constructions", "transitivity-witness");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const Alphabet F = random_alphabet(rng, 2, 4);
    const CoeffSeq u = random_periodic(rng, F, 4, 3);
    CoeffSeq v = random_periodic(rng, F, 4, 3);
    if (t % 5 == 3) v = CoeffSeq::word_enumeration(F, rng.below(5000));
    if (t % 5 == 4) v = u;
    const LpSpec spec = random_spec(rng, g);
    const double eu = pick(rng, tolerances()), ev = pick(rng, tolerances());
    rec.guard([&] { return Json{{"u", seq_json(u)}, {"v", seq_json(v)}, {"alphabet", to_json(F)}}; }, [&] {
      const TransitivityWitness w = transitivity_witness(u, v, eu, ev, F, spec);
      // Recheck both distances independently of the witness' own certificates.
      const BoundInterval du = rho_p(SeriesFn(w.h, g), SeriesFn(u, g), spec, eu * 1e-3);
      const BoundInterval dv = rho_p(SeriesFn(w.h.shift(w.n), g), SeriesFn(v, g), spec, ev * 1e-3);
      rec.expect(du.hi() < eu && dv.hi() < ev && w.h.in_EF(F), [&] {
        return Json{{"u", seq_json(u)}, {"v", seq_json(v)}, {"h", seq_json(w.h)}, {"n", index_to_string(w.n)},
                    {"distance_u", to_json(du)}, {"distance_v", to_json(dv)}};
      });
    });
  }
  return rec.done();
}

PropertyResult orbit_prefix(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("constructions", "orbit-reaches-target-prefix");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const Alphabet F = random_alphabet(rng, 1, 3);
    const CoeffSeq target = random_periodic(rng, F, 4, 3);
    const LpSpec spec = random_spec(rng, g);
    const double eps = pick(rng, tolerances());
    rec.guard([&] { return Json{{"target", seq_json(target)}, {"alphabet", to_json(F)}, {"eps", eps}}; }, [&] {
      const CoeffSeq b = dense_orbit_point(F);
      const OrbitHit hit = orbit_search(b, target, F, spec, eps);
      const bool prefix_ok = b.shift(hit.l).prefix(hit.N + 1) == target.prefix(hit.N + 1);
      rec.expect(prefix_ok && hit.distance.hi() < eps, [&] {
        return Json{{"target", seq_json(target)}, {"alphabet", to_json(F)}, {"eps", eps},
                    {"l", index_to_string(hit.l)}, {"N", hit.N}, {"distance", to_json(hit.distance)}};
      });
    });
  }
  return rec.done();
}

PropertyResult two_coefficient_values(Rng& rng, std::size_t trials) {
  Recorder rec("constructions", "approximant-has-two-coefficient-values");
  for (std::size_t t = 0; t < trials; ++t) {
    const Polynomial P = t % 4 == 0 ? Polynomial() : random_polynomial(rng, 5);
    const double eps = pick(rng, tolerances());
    const double g = rng.uniform(0.25, 3.0);
    const Polynomial Q = ensure_two_coeff_values(P, eps);
    rec.guard([&] { return Json{{"P", seq_json(P.as_sequence())}, {"eps", eps}}; }, [&] {
      const BoundInterval d = rho_p(P.as_function(g), Q.as_function(g), LpSpec::sup(g), eps * 1e-3);
      rec.expect(Q.coefficient_set().size() >= 2 && d.hi() < eps / 2 && (P.is_zero() || Q == P), [&] {
        return Json{{"P", seq_json(P.as_sequence())}, {"Q", seq_json(Q.as_sequence())}, {"eps", eps},
                    {"distance", to_json(d)}};
      });
    });
  }
  return rec.done();
}

PropertyResult ef_approximation_property(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("constructions", "finite-alphabet-approximation");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const LpSpec spec = random_spec(rng, g);
    const double eps = t % 2 == 0 ? 0.1 : 0.01;
    const bool polynomial = t % 3 != 2;
    const SeriesFn f = polynomial ? (t % 7 == 0 ? Polynomial() : random_polynomial(rng, 6)).as_function(g)
                                  : SeriesFn(random_periodic(rng, random_alphabet(rng, 1, 3), 4, 3), g);
    rec.guard([&] { return Json{{"f", to_json(f)}, {"eps", eps}}; }, [&] {
      const EFApproximation r = polynomial ? ef_approximation(Polynomial(f.coeffs().preamble()), spec, eps)
                                           : ef_approximation(f, spec, eps);
      const BoundInterval d = rho_p(f, SeriesFn(r.member, g), spec, eps * 1e-3);
      rec.expect(r.F.size() >= 2 && r.member.in_EF(r.F) && d.hi() < eps, [&] {
        return Json{{"f", to_json(f)}, {"eps", eps}, {"p", exponent_to_string(spec.p)},
                    {"alphabet", to_json(r.F)}, {"member", seq_json(r.member)}, {"distance", to_json(d)}};
      });
    });
  }
  return rec.done();
}

PropertyResult filtration_nesting(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("constructions", "filtration-nests");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const LpSpec spec = random_spec(rng, g);
    const SeriesFn f(random_periodic(rng, random_alphabet(rng, 1, 3), 3, 3), g);
    rec.guard([&] { return Json{{"f", to_json(f)}}; }, [&] {
      const auto steps = filtration(f, spec, 5);
      for (std::size_t n = 1; n <= steps.size(); ++n) {
        const FiltrationStep& s = steps[n - 1];
        const bool nested = n == 1 || steps[n - 2].F.is_subset_of(s.F);
        rec.expect(nested && s.F.size() >= 2 && s.member.in_EF(s.F) && s.distance.hi() < 1.0 / n, [&] {
          return Json{{"f", to_json(f)}, {"n", n}, {"alphabet", to_json(s.F)}, {"distance", to_json(s.distance)}};
        });
      }
    });
  }
  return rec.done();
}

PropertyResult periodic_density_full_space(const std::vector<double>& gammas, Rng& rng, std::size_t trials) {
  Recorder rec("constructions", "periodic-points-dense-in-smooth-functions");
  for (std::size_t t = 0; t < trials; ++t) {
    const double g = pick(rng, gammas);
    const LpSpec spec = random_spec(rng, g);
    const double eps = pick(rng, tolerances());
    const Polynomial P = ensure_two_coeff_values(random_polynomial(rng, 5), eps);
    rec.guard([&] { return Json{{"P", seq_json(P.as_sequence())}, {"eps", eps}}; }, [&] {
      const PeriodicPoint r = periodic_point_in_cinf(P, spec, eps);
      const BoundInterval d = rho_p(P.as_function(g), SeriesFn(r.g, g), spec, eps * 1e-3);
      rec.expect(r.g.shift(r.period_length) == r.g && d.hi() < eps, [&] {
        return Json{{"P", seq_json(P.as_sequence())}, {"eps", eps}, {"gamma", g}, {"p", exponent_to_string(spec.p)},
                    {"g", seq_json(r.g)}, {"distance", to_json(d)}};
      });
    });
  }
  return rec.done();
}

PropertyResult sensitivity(const std::vector<double>& gammas, Rng& rng, std::size_t random_targets,
                           const std::vector<double>& betas, const std::vector<double>& epsilons) {
  Recorder rec("constructions", "sensitive-dependence-witness");
  for (double g : gammas) {
    std::vector<SeriesFn> targets{SeriesFn(CoeffSeq::zero(), g)};
    for (std::size_t i = 0; i < random_targets; ++i) targets.push_back(random_polynomial(rng, 5).as_function(g));
    for (const SeriesFn& f : targets) {
      for (double beta : betas) {
        for (double eps : epsilons) {
          rec.guard([&] { return Json{{"f", to_json(f)}, {"beta", beta}, {"eps", eps}}; }, [&] {
            const SensitivityWitness w = sensitivity_witness(f, beta, eps);
            const LpSpec sup = LpSpec::sup(g);
            const BoundInterval close = rho_p(f, w.g, sup, eps * 1e-3);
            const BoundInterval far = rho_p(differentiate(f, w.n), differentiate(w.g, w.n), sup, 1e-6 * beta);
            rec.expect(close.hi() < eps && far.lo() > beta, [&] {
              return Json{{"f", to_json(f)}, {"beta", beta}, {"eps", eps}, {"n", index_to_string(w.n)},
                          {"close", to_json(close)}, {"far", to_json(far)}};
            });
          });
        }
      }
    }
  }
  return rec.done();
}

// ---------------------------------------------------------------- runner

std::vector<PropertyResult> run_verify(const VerifyConfig& config,
                                       const std::function<void(const PropertyResult&)>& on_result) {
  static const std::vector<std::string> kSuites = {"tailmath", "coeffspace", "metrics", "conjugacy",
                                                   "constructions"};
  if (config.suite != "all" && std::find(kSuites.begin(), kSuites.end(), config.suite) == kSuites.end()) {
    throw ConfigError("unknown suite '" + config.suite + "'");
  }
  for (double g : config.gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("gamma must be positive and finite");
  }
  if (config.trials == 0) throw ConfigError("trials must be positive");

  std::vector<PropertyResult> results;
  auto emit = [&](PropertyResult r) {
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  };
  auto gammas_or = [&](std::vector<double> fallback) { return config.gammas.empty() ? fallback : config.gammas; };
  auto wants = [&](const char* s) { return config.suite == "all" || config.suite == s; };
  const std::size_t n = config.trials;
  Rng rng(config.seed);

  if (wants("tailmath")) {
    const auto gs = gammas_or({0.25, 0.5, 1.0, 2.0, 5.0});
    emit(tail_monotonicity(gs, config.k_max));
    emit(tail_vanishing(gs, config.k_max));
    emit(xi_threshold(gs, 100));
    emit(alpha_positivity(config.k_max));
    emit(enclosure_nesting(gs, config.k_max));
  }
  const auto gs = gammas_or({0.5, 1.0, 2.0});
  if (wants("coeffspace")) {
    emit(shift_derivative_coherence(gs, rng, n));
    emit(periodic_shift_return(rng, n));
    emit(word_enumeration_completeness(3, 4));
    emit(membership_shift_invariance(rng, n));
    emit(json_round_trip(rng, n));
  }
  if (wants("metrics")) {
    emit(metric_axioms(gs, rng, n));
    emit(holder_inequality(gs, rng, 2 * n));
    emit(agreement_bounds_dE(4, 3, 8));
    emit(small_dE_forces_agreement(4, 3, 8));
    emit(agreement_bounds_sup({binary(), Alphabet({0, 1, 2}), Alphabet({-1, 0, 1})}, gs, 2, 2));
    emit(l1_closeness_forces_agreement(gs, 4, 2, 4));
    emit(l1_to_dE_continuity(gs, rng, n));
    emit(dE_to_sup_continuity(gs, rng, n));
  }
  if (wants("conjugacy")) {
    emit(commuting_square(gs, rng, n, 128));
    emit(iota_isometry(rng, n));
    emit(translation_inverse(rng, n));
    emit(translation_isometry(gs, rng, n / 2 + 1));
    emit(no_isolated_points(gs, rng, n));
  }
  if (wants("constructions")) {
    emit(periodic_density_EF(gs, rng, n));
    emit(transitivity(gs, rng, n));
    emit(orbit_prefix(gs, rng, n));
    emit(two_coefficient_values(rng, n));
    emit(ef_approximation_property(gs, rng, n / 2 + 1));
    emit(filtration_nesting(gs, rng, n / 4 + 1));
    emit(periodic_density_full_space(gs, rng, n / 2 + 1));
    emit(sensitivity(gs, rng, std::max<std::size_t>(n / 5, 1), {1.0, 10.0, 1e4}, {0.5, 1e-2}));
  }
  return results;
}

}  // namespace chaoslab

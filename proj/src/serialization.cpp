#include "chaoslab/serialization.hpp"

#include <cstdint>
#include <fstream>

#include "chaoslab/errors.hpp"

namespace chaoslab {
namespace {

Json rational_array(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Rational rational_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.dump());
  if (j.is_number_float()) return from_double(j.get<double>());
  throw ConfigError("expected a rational as \"p/q\" string or number, got " + j.dump());
}

std::vector<Rational> rationals_at(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  const Json& a = j.at(key);
  if (!a.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  std::vector<Rational> out;
  for (const auto& x : a) out.push_back(rational_from(x));
  return out;
}

}  // namespace

Json to_json(const CoeffSeq& s) {
  Json j;
  j["kind"] = std::string(to_string(s.kind()));
  switch (s.kind()) {
    case TailKind::FiniteSupport: j["preamble"] = rational_array(s.preamble()); break;
    case TailKind::EventuallyPeriodic:
      j["preamble"] = rational_array(s.preamble());
      j["period"] = rational_array(s.period());
      break;
    case TailKind::WordEnumeration:
      j["alphabet"] = rational_array(s.alphabet().values());
      if (s.offset() <= std::numeric_limits<std::uint64_t>::max()) {
        j["offset"] = static_cast<std::uint64_t>(s.offset());
      } else {
        j["offset"] = index_to_string(s.offset());
      }
      break;
  }
  return j;
}

Json to_json(const SeriesFn& f) {
  Json j = to_json(f.coeffs());
  j["gamma"] = f.gamma();
  j["origin"] = f.origin();
  return j;
}

Json to_json(const BoundInterval& x) { return Json{{"lo", x.lo()}, {"hi", x.hi()}}; }

Json to_json(const Alphabet& F) { return rational_array(F.values()); }

CoeffSeq coeffseq_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("coefficient sequence needs a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "finite") return CoeffSeq::finite(rationals_at(j, "preamble"));
    if (kind == "periodic") return CoeffSeq::periodic(rationals_at(j, "preamble"), rationals_at(j, "period"));
    if (kind == "enum") {
      Index offset = 0;
      if (j.contains("offset")) {
        const Json& o = j.at("offset");
        if (o.is_number_unsigned()) offset = o.get<std::uint64_t>();
        else if (o.is_string()) offset = parse_index(o.get<std::string>());
        else if (o.is_number_integer() && o.get<std::int64_t>() >= 0) offset = o.get<std::uint64_t>();
        else throw ConfigError("'offset' must be a non-negative integer");
      }
      return CoeffSeq::word_enumeration(Alphabet(rationals_at(j, "alphabet")), offset);
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid coefficient sequence: ") + e.what());
  }
  throw ConfigError("unknown sequence kind '" + kind + "'");
}

SeriesFn seriesfn_from_json(const Json& j, std::optional<double> default_gamma) {
  CoeffSeq s = coeffseq_from_json(j);
  double gamma = 0.0;
  if (j.contains("gamma")) {
    if (!j.at("gamma").is_number()) throw ConfigError("'gamma' must be a number");
    gamma = j.at("gamma").get<double>();
  } else if (default_gamma) {
    gamma = *default_gamma;
  } else {
    throw ConfigError("missing 'gamma'");
  }
  double origin = 0.0;
  if (j.contains("origin")) {
    if (!j.at("origin").is_number()) throw ConfigError("'origin' must be a number");
    origin = j.at("origin").get<double>();
  }
  try {
    return SeriesFn(std::move(s), gamma, origin);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

Polynomial polynomial_from_json(const Json& j) {
  const CoeffSeq s = coeffseq_from_json(j);
  if (s.kind() != TailKind::FiniteSupport) throw ConfigError("a polynomial needs kind 'finite'");
  return Polynomial(s.preamble());
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace chaoslab

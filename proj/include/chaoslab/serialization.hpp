#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "chaoslab/coeffspace.hpp"
#include "chaoslab/constructions.hpp"

namespace chaoslab {

using Json = nlohmann::ordered_json;

// {"kind": "finite" | "periodic" | "enum", "preamble": [...], "period": [...],
//  "alphabet": [...], "offset": n}; rationals as "p/q" strings. Offsets past
// 2^64 are written as decimal strings.
Json to_json(const CoeffSeq& s);
// Adds "gamma" and "origin".
Json to_json(const SeriesFn& f);
Json to_json(const BoundInterval& x);
Json to_json(const Alphabet& F);

// ConfigError on malformed input; unknown keys are ignored.
CoeffSeq coeffseq_from_json(const Json& j);
// gamma falls back to `default_gamma` when the document has none.
SeriesFn seriesfn_from_json(const Json& j, std::optional<double> default_gamma = std::nullopt);
Polynomial polynomial_from_json(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace chaoslab

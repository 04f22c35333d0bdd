#pragma once

#include <string>

#include <json.hpp>

#include "metriforge/alexandrov.hpp"
#include "metriforge/classifier.hpp"
#include "metriforge/probe.hpp"
#include "metriforge/spaces.hpp"

namespace metriforge {

// Key order is fixed everywhere so identical inputs render byte-identical
// reports.
using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// {"command": ..., "version": ..., "seed": ..., "inputs": {...}}; command
// payloads append their own keys after these.
Json envelope(const std::string& command, std::uint64_t seed, Json inputs);

Json witness_json(const Witness& w);
Json verdict_json(const Verdict& v);
Json classification_json(const ClassificationReport& rep);
Json space_json(const FiniteSpace& s);
Json violation_json(const AxiomViolation& v,
                    const std::vector<std::string>& labels);
Json inclusion_json(const InclusionReport& r);
Json convergence_json(const ConvergenceVerdict& v);
Json probe_json(const ProbeReport& rep);

// dump(2) with a trailing newline.
std::string render(const Json& j);

}  // namespace metriforge

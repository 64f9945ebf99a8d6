#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavepot/dynamics.hpp"

namespace wavepot {

// One requested post-processing step.
struct AnalysisRequest {
    std::string metric;               // see known_metrics()
    std::vector<double> z_rayleigh;   // evaluation points in units of z_R
    bool smooth = false;              // 3-point smoothing before maxima search

    bool operator==(const AnalysisRequest&) const = default;
};

struct Scenario {
    std::string name = "gaussian";  // gaussian | single-slit | two-slit | custom
    LaunchProfile profile;
    Medium medium;
    RunConfig config;
    std::vector<AnalysisRequest> analyses;
};

const std::vector<std::string>& known_metrics();
const std::vector<std::string>& known_scenarios();

// Built-in scenario with every field at its default.
Scenario builtin_scenario(const std::string& name);

// Parses a configuration document (JSON; // and /* */ comments allowed).
// Unknown keys, wrong types and violated invariants raise ConfigError with
// the offending field path.
Scenario parse_config(const std::string& text);

// Applies command-line overrides to a configuration document before it is
// parsed, so derived values (e.g. step counts) follow the new eps.
std::string apply_overrides(const std::string& text, std::optional<double> eps, bool eikonal);

// Canonical document for a resolved scenario; parse_config(serialize(s))
// reproduces s.
std::string serialize_scenario(const Scenario& scenario);

// SHA-256 (hex) of the canonical document.
std::string config_hash(const Scenario& scenario);

bool scenarios_equal(const Scenario& a, const Scenario& b);

}  // namespace wavepot

#pragma once

#include "jetsolve/picard.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace jetsolve {

struct KobayashiSettings {
    std::string target = "hyperbolic";
    std::vector<double> p;  // empty means the chart origin
    std::vector<double> X;
    double R_start = 0.25;
    double growth = 1.5;
    int max_steps = 10;
    double conformal_tol = 1e-8;
};

struct RunConfig {
    std::string command = "solve";  // solve | verify-lemmas | kobayashi
    std::string system = "laplace";
    nlohmann::json system_params = nlohmann::json::object();
    int n = 2;
    int m = 1;
    std::vector<double> c0;               // empty means zeros
    std::vector<std::vector<double>> c1;  // empty means zeros
    SolveConfig solve;
    nlohmann::json harmonic_seed = nlohmann::json::array();
    std::string report_path = "report.json";
    std::string field_path = "field.csv";
    int threads = 0;
    KobayashiSettings kobayashi;

    JetSpec jet() const;
};

// Validates a configuration document and fills defaults. Unknown keys and
// out-of-range values raise ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& doc);

// The fully resolved configuration, defaults included.
nlohmann::json config_to_json(const RunConfig& config);

// Sets `key` (dotted for nesting, e.g. "kobayashi.growth") to `value`, parsed
// as JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& key, const std::string& value);

// [{ "coef": c, "exponent": [a, b, c] }, ...] per component.
HarmonicSeed parse_harmonic_seed(const nlohmann::json& seed, int n, int m);

} // namespace jetsolve

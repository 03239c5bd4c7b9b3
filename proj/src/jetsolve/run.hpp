#pragma once

#include "jetsolve/config.hpp"

#include <json.hpp>

#include <string>

namespace jetsolve {

enum ExitCode : int {
    kExitOk = 0,
    kExitLemmaFailure = 1,
    kExitNoConvergence = 2,
    kExitConfigError = 3,
    kExitOracleFailure = 4,
    kExitInternal = 5,
};

struct RunOutput {
    int exit_code = kExitOk;
    nlohmann::json report;  // deterministic part, sorted keys
    std::string field_csv;  // empty when the command produces no field
    std::string error;
    std::string error_field;
    std::string timestamp;  // UTC, ISO 8601
};

// Parses and executes a configuration document. Never throws for user errors;
// they come back as exit codes with `error` and `error_field` set.
RunOutput run(const nlohmann::json& doc);
RunOutput run(const RunConfig& config);

// report.json text: the report with a "metadata" block holding the timestamp.
std::string report_text(const RunOutput& out);

// Writes report.json and, when present, field.csv.
void write_outputs(const RunOutput& out, const std::string& report_path, const std::string& field_path);

} // namespace jetsolve

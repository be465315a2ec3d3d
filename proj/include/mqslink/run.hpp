#pragma once

// Executes the requests of a scenario config and records what happened.

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mqslink/config.hpp"

namespace mqslink {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kReportFileName = "report.json";

struct RequestOutcome {
  std::string name;
  std::string kind;
  bool ok = true;
  std::vector<std::string> outputs;   // file names relative to the output directory
  std::vector<std::string> warnings;  // masked or low-confidence data in those outputs
  std::string error;                  // set when ok is false
  std::map<std::string, double> metrics;
};

struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string artifact_version = kArtifactVersion;
  std::string config_digest;
  std::vector<RequestOutcome> requests;  // in declared order
  std::vector<std::string> warnings;     // scenario-level
  std::map<std::string, double> timings_ms;

  bool any_failed() const;
};

/// Versioned JSON text. Timings sit in their own "timings_ms" object; with
/// include_timings = false it is left out, which makes the text a pure
/// function of the config.
std::string report_json(const RunReport& report, bool include_timings = true);

/// Inverse of report_json. Throws Error on malformed input or an unsupported
/// schema version.
RunReport parse_report_json(const std::string& text);

void emit_report_json(const RunReport& report, const std::filesystem::path& path);

struct RunOptions {
  bool write_report = true;
  std::function<void(const std::string&)> progress;  // called before each request
};

/// Runs every request in declared order and writes its outputs (plus
/// report.json) into out_dir, which is created if needed. Failures of single
/// requests are recorded in the report rather than thrown.
RunReport run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                       const RunOptions& options = {});

}  // namespace mqslink

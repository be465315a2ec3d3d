#pragma once

// Scenario configuration files.
//
// Sectioned key/value text:
//
//   # comment
//   [tx]
//   turns = 5 turns
//   inner_radius = 60 mm
//
//   [request.tuned]
//   kind = spectrum
//   output = tuned_spectrum.csv
//
// Every number carries a unit tag, converted to SI on load (angles stay in
// degrees, levels in dBV). Unknown sections and keys are rejected.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mqslink/errors.hpp"
#include "mqslink/field_coupling.hpp"
#include "mqslink/geometry.hpp"
#include "mqslink/link_analysis.hpp"

namespace mqslink {

/// Config validation failure; the message is prefixed with "source:line: ".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);

  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class RequestKind { spectrum, capacity, misalignment, impedance, dual_mode, field_map, lumped };

struct Request {
  std::string name;
  RequestKind kind = RequestKind::spectrum;
  std::string output;
  int line = 0;

  bool tuned = true;  // spectrum
  MisalignmentAxis axis = MisalignmentAxis::tx_angle;  // misalignment
  std::vector<double> values;  // misalignment (deg or m) / impedance (ohm)
  std::string impedance_param = "r_source";  // r_source | r_load
  std::string coil = "tx";  // field_map
  double current = 1.0;     // field_map, A
  PlaneGrid grid;           // field_map
};

struct ScenarioConfig {
  Scenario scenario = nominal_scenario();
  LinkSettings settings = nominal_link_settings();
  double sweep_start = kDefaultSweepStart;
  double sweep_stop = kDefaultSweepStop;
  std::size_t sweep_points = kDefaultSweepPoints;
  double noise_floor_dbv = kDefaultNoiseFloorDbv;
  SnrConvention snr_convention = SnrConvention::voltage;
  std::vector<Request> requests;

  AnalysisOptions analysis_options() const;
};

struct ParseOptions {
  /// Fill missing sections/keys (and an empty request list) from the nominal
  /// necklace/lens configuration.
  bool allow_defaults = false;
};

ScenarioConfig parse_config_text(const std::string& text, const std::string& source_name,
                                 const ParseOptions& options = {});

/// Throws ConfigError for malformed content, Error if the file is unreadable.
ScenarioConfig parse_config(const std::filesystem::path& path, const ParseOptions& options = {});

/// The nominal configuration as config-file text, with the default requests.
std::string default_config_text();

/// Canonical SI serialization used for the digest.
std::string canonical_text(const ScenarioConfig& config);

/// "fnv1a64:<16 hex digits>" of canonical_text().
std::string config_digest(const ScenarioConfig& config);

const char* to_string(RequestKind kind);

}  // namespace mqslink

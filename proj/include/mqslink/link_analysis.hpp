#pragma once

// Communication/power metrics derived from spectra, and the misalignment and
// impedance studies built on top of geometry, coupling and circuit.

#include <optional>
#include <string>
#include <vector>

#include "mqslink/circuit.hpp"
#include "mqslink/errors.hpp"
#include "mqslink/field_coupling.hpp"
#include "mqslink/geometry.hpp"
#include "mqslink/lumped.hpp"

namespace mqslink {

struct Band {
  double f_low;
  double f_high;
  double bandwidth;
};

/// Band edges run past the ends of the frequency grid. Carries the edges that
/// were found (nullopt for the side that ran out).
class TruncatedBand : public Error {
 public:
  TruncatedBand(const std::string& what, std::optional<double> f_low, std::optional<double> f_high)
      : Error(what), f_low_(f_low), f_high_(f_high) {}

  std::optional<double> f_low() const { return f_low_; }
  std::optional<double> f_high() const { return f_high_; }

 private:
  std::optional<double> f_low_;
  std::optional<double> f_high_;
};

/// Index of the first global maximum of |H|.
std::size_t peak_index(const Spectrum& spectrum);

/// True when exactly one grid point attains the maximum |H|.
bool has_unique_peak(const Spectrum& spectrum);

/// Outermost crossings of (peak - drop_db), linearly interpolated in dB
/// between grid points. Throws TruncatedBand when the level set reaches a
/// grid edge.
Band band_below_peak(const Spectrum& spectrum, double drop_db);

inline Band three_db_bandwidth(const Spectrum& spectrum) { return band_below_peak(spectrum, 3.0); }

enum class SnrConvention {
  voltage,  // log2(1 + 10^(SNR/20)), the voltage-ratio reading
  power,    // log2(1 + 10^(SNR/10)), textbook Shannon-Hartley
};

inline constexpr double kDefaultNoiseFloorDbv = -85.0;

double snr_db(double signal_dbv, double noise_floor_dbv);

/// bw * log2(1 + snr_linear). Zero for snr_db = -infinity.
double channel_capacity(double bandwidth, double snr_db,
                        SnrConvention convention = SnrConvention::voltage);

struct CapacityReport {
  double bandwidth;
  double signal_dbv;
  double noise_floor_dbv;
  double snr_db;
  double capacity;
};

/// Capacity over the 3 dB band at the peak level.
CapacityReport capacity_report(const Spectrum& spectrum, double v_source, double noise_floor_dbv,
                               SnrConvention convention = SnrConvention::voltage);

struct CapacityRow {
  double threshold_db;                  // below peak
  std::optional<Band> band;             // empty when truncated
  double signal_dbv;
  double snr_db;
  std::optional<double> capacity;
};

struct CapacityTable {
  std::vector<CapacityRow> rows;
  std::optional<std::size_t> best_row;  // argmax capacity over unmasked rows
};

/// Rows for thresholds 1..30 dB below peak: band at (peak - threshold),
/// signal level (peak - threshold), capacity against the noise floor.
CapacityTable capacity_vs_bandwidth(const Spectrum& spectrum, double v_source,
                                    double noise_floor_dbv,
                                    SnrConvention convention = SnrConvention::voltage);

/// How a scenario turns into a circuit.
struct LinkSettings {
  std::optional<double> l_tx_override;  // H
  std::optional<double> l_rx_override;
  EsrMode esr_mode = EsrMode::skin_effect;
  int segments_per_turn = kDefaultSegmentsPerTurn;
  CouplingOptions coupling;
};

struct AnalysisOptions {
  std::vector<double> grid = linear_grid(kDefaultSweepStart, kDefaultSweepStop, kDefaultSweepPoints);
  double noise_floor_dbv = kDefaultNoiseFloorDbv;
  SnrConvention snr_convention = SnrConvention::voltage;
};

/// Nominal settings: 35 uH transmitter override, estimated receiver.
LinkSettings nominal_link_settings();

struct LinkModel {
  InductanceEstimate tx_inductance;
  InductanceEstimate rx_inductance;
  CouplingResult coupling;
  LinkCircuit circuit;  // tuned when built with tuned = true
  TuningResult tx_tuning{0.0};
};

/// Builds both coils, poses them, integrates M, and fills the circuit. With
/// tuned = true, C_tx resonates L_tx at the tuned frequency and C_rx follows
/// from L_tx C_tx = L_rx C_rx. Coil ESR comes from the skin-effect formula at
/// the tuned frequency.
LinkModel build_link(const Scenario& sc, const LinkSettings& settings, bool tuned = true);

/// Same as build_link with a precomputed coupling.
LinkModel build_link(const Scenario& sc, const LinkSettings& settings, const CouplingResult& coupling,
                     bool tuned = true);

CouplingResult scenario_coupling(const Scenario& sc, const LinkSettings& settings);

struct SweepRow {
  double param;
  std::optional<double> peak_db;
  std::optional<double> peak_frequency;
  std::optional<double> bandwidth_3db;
  std::optional<double> capacity;
  std::optional<double> received_power;
  std::optional<double> mutual_inductance;
  std::string note;  // reason a field is masked, empty otherwise
};

struct SweepResult {
  std::string param_name;
  std::string param_unit;
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

/// Spectrum summary: peak level/frequency, 3 dB band, capacity over that band,
/// and average load power at the peak.
SweepRow summarize_spectrum(double param, const Spectrum& spectrum, const LinkCircuit& link,
                            const AnalysisOptions& options);

enum class MisalignmentAxis { tx_angle, lateral, axial };

/// Rebuilds the geometry at every value, recomputes M, and sweeps the circuit.
/// Tuning capacitors are those of the nominal scenario and stay fixed across
/// the sweep (the worn device is tuned once). Values are degrees for tx_angle
/// and meters otherwise; allowed ranges are 0..90 deg, 0..0.2 m lateral and
/// 0.05..0.3 m axial. Coupling failures mask the row.
SweepResult misalignment_sweep(const Scenario& sc, const LinkSettings& settings,
                               const AnalysisOptions& options, MisalignmentAxis axis,
                               const std::vector<double>& values);

struct ImpedanceSweep {
  SweepResult source;  // over R_source, R_load nominal
  SweepResult load;    // over R_load, R_source nominal
};

/// Spectrum summaries with one resistance varied and the other at nominal.
ImpedanceSweep impedance_sweep(const LinkCircuit& link, const std::vector<double>& r_source_values,
                               const std::vector<double>& r_load_values,
                               const AnalysisOptions& options);

struct DualModeReport {
  double frequency;
  double power_mode_r_load;
  double comm_mode_r_load;
  double power_mode_p_rx;
  double comm_mode_p_rx;
  double power_mode_v_rx;
  double comm_mode_v_rx;
};

std::vector<double> default_load_grid();

/// Power mode: R_load maximizing average load power. Communication mode:
/// smallest R_load whose received voltage reaches 95% of the largest
/// received voltage on the grid. Evaluated at `frequency`.
DualModeReport dual_mode_report(const LinkCircuit& link, double frequency,
                                const std::vector<double>& r_load_grid = default_load_grid());

const char* to_string(MisalignmentAxis axis);
const char* to_string(SnrConvention c);

}  // namespace mqslink

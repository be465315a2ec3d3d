#pragma once

// Two-mesh series-series resonant link: source, Tx coil, coupling, Rx coil,
// load. Voltages are peak amplitudes; average powers use 1/2 Re(V I*).

#include <complex>
#include <optional>
#include <vector>

namespace mqslink {

using Complex = std::complex<double>;

enum class EsrMode {
  fixed,        // coil resistances used as given at every frequency
  skin_effect,  // coil resistances scale as sqrt(f / esr_reference_frequency)
};

struct LinkCircuit {
  double l_tx = 0.0;  // H
  double l_rx = 0.0;  // H
  double r_coil_tx = 0.0;  // ohm, at esr_reference_frequency
  double r_coil_rx = 0.0;
  double mutual = 0.0;    // H
  double r_source = 50.0;
  double r_load = 1000.0;
  std::optional<double> c_tx;  // F; absent = shorted (untuned)
  std::optional<double> c_rx;
  double v_source = 1.0;  // V peak
  std::optional<double> parasitic_tx;  // F, parallel to the coil
  std::optional<double> parasitic_rx;
  EsrMode esr_mode = EsrMode::fixed;
  double esr_reference_frequency = 0.0;  // Hz, skin_effect mode only

  void validate() const;
  double coil_resistance_tx(double frequency) const;
  double coil_resistance_rx(double frequency) const;
  bool tuned() const { return c_tx.has_value() || c_rx.has_value(); }
};

struct MeshSolution {
  Complex source_current;  // through R_source
  Complex load_current;    // through R_load
  Complex load_voltage;    // across R_load
};

MeshSolution solve_mesh(const LinkCircuit& link, double frequency);

/// V_rx / V_tx = j w M R_load / ((j w L_tx + R_source)(j w L_rx + R_load) + w^2 M^2),
/// the closed form for a link without tuning capacitors. Coil ESR is ignored.
Complex transfer_ratio_untuned(const LinkCircuit& link, double frequency);

/// V_load / V_source from the full mesh solution.
Complex transfer_ratio(const LinkCircuit& link, double frequency);

/// Z11 = V_source / I_source - R_source.
Complex input_impedance(const LinkCircuit& link, double frequency);

struct TuningResult {
  double capacitance;
  bool below_parasitic = false;  // the external capacitor will not dominate
};

/// C = 1 / ((2 pi f0)^2 L)
TuningResult tune_capacitance(double inductance, double f0,
                              std::optional<double> parasitic = std::nullopt);

/// C_rx = L_tx C_tx / L_rx, so both meshes share one resonance.
double receiver_capacitance(double l_tx, double c_tx, double l_rx);

double resonant_frequency(double inductance, double capacitance);

struct Spectrum {
  std::vector<double> frequency;
  std::vector<Complex> transfer;
  std::vector<Complex> z11;

  std::size_t size() const { return frequency.size(); }
};

/// n points from f_start to f_stop inclusive.
std::vector<double> linear_grid(double f_start, double f_stop, std::size_t n);
std::vector<double> log_grid(double start, double stop, std::size_t n);

inline constexpr double kDefaultSweepStart = 20e6;
inline constexpr double kDefaultSweepStop = 30e6;
inline constexpr std::size_t kDefaultSweepPoints = 1001;

Spectrum frequency_sweep(const LinkCircuit& link, const std::vector<double>& grid);

/// L = Im(Z11) / (2 pi f). Throws CapacitiveRegime when Im(Z11) <= 0.
double extract_inductance(Complex z11, double frequency);

/// P = V^2 / R_load for the given voltage. Pass an RMS voltage for the
/// average power.
double received_power(double v_rx, double r_load);

/// Average power dissipated in the load: received_power(|V_load| / sqrt 2, R_load).
double load_power(const LinkCircuit& link, double frequency);

/// Average power delivered by the source: 1/2 Re(V_source conj(I_source)).
double tx_power(const LinkCircuit& link, double frequency);

/// 20 log10 |H|; -infinity when |H| = 0.
double path_loss_db(Complex h);

}  // namespace mqslink

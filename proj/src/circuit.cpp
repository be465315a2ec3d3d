#include "mqslink/circuit.hpp"

#include <cmath>
#include <limits>

#include "mqslink/constants.hpp"
#include "mqslink/errors.hpp"

namespace mqslink {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw InvalidArgument(message);
}

void require_frequency(double f) { require(f > 0 && std::isfinite(f), "frequency must be > 0"); }

Complex series_capacitor(const std::optional<double>& c, double omega) {
  if (!c) return {0.0, 0.0};
  return {0.0, -1.0 / (omega * *c)};
}

Complex shunt_admittance(const std::optional<double>& c, double omega) {
  if (!c) return {0.0, 0.0};
  return {0.0, omega * *c};
}

}  // namespace

void LinkCircuit::validate() const {
  require(l_tx > 0 && l_rx > 0, "inductances must be > 0");
  require(r_coil_tx >= 0 && r_coil_rx >= 0, "coil resistances must be >= 0");
  require(r_source > 0 && r_load > 0, "source and load resistances must be > 0");
  require(v_source > 0, "v_source must be > 0");
  require(std::isfinite(mutual) && mutual * mutual <= l_tx * l_rx, "M^2 must not exceed L_tx L_rx");
  require(!c_tx || *c_tx > 0, "C_tx must be > 0");
  require(!c_rx || *c_rx > 0, "C_rx must be > 0");
  require(!parasitic_tx || *parasitic_tx > 0, "parasitic capacitance must be > 0");
  require(!parasitic_rx || *parasitic_rx > 0, "parasitic capacitance must be > 0");
  require(esr_mode == EsrMode::fixed || esr_reference_frequency > 0,
          "skin-effect ESR needs a reference frequency");
}

double LinkCircuit::coil_resistance_tx(double frequency) const {
  if (esr_mode == EsrMode::fixed) return r_coil_tx;
  return r_coil_tx * std::sqrt(frequency / esr_reference_frequency);
}

double LinkCircuit::coil_resistance_rx(double frequency) const {
  if (esr_mode == EsrMode::fixed) return r_coil_rx;
  return r_coil_rx * std::sqrt(frequency / esr_reference_frequency);
}

// The coupled coils form a two-port with impedance matrix Z = [[za, zm], [zm, zb]],
// zm = j w M. A parasitic capacitor across a coil adds its admittance at that
// port, so the terminal matrix is Zt = (Z^-1 + diag(ya, yb))^-1, which
// expands to
//   Zt = [[za + yb D, zm], [zm, zb + ya D]] / (1 + ya za + yb zb + ya yb D),
//   D = za zb - zm^2.
// Folding the shunts in before closing the meshes keeps Zt symmetric and
// avoids the cancellation a mesh-plus-shunt system suffers far above the
// coil self-resonance. The external impedances (source or load resistor plus
// the optional series capacitor) then close each port:
//   V_s = Ze_a I_1 + V_1,   0 = Ze_b I_2 + V_2,   V = Zt I.
MeshSolution solve_mesh(const LinkCircuit& link, double frequency) {
  require_frequency(frequency);
  const double w = 2.0 * kPi * frequency;
  const Complex za = Complex(link.coil_resistance_tx(frequency), w * link.l_tx);
  const Complex zb = Complex(link.coil_resistance_rx(frequency), w * link.l_rx);
  const Complex zm(0.0, w * link.mutual);
  const Complex ze_a = link.r_source + series_capacitor(link.c_tx, w);
  const Complex ze_b = link.r_load + series_capacitor(link.c_rx, w);
  const Complex ya = shunt_admittance(link.parasitic_tx, w);
  const Complex yb = shunt_admittance(link.parasitic_rx, w);

  Complex t11 = za;
  Complex t22 = zb;
  Complex t12 = zm;
  if (ya != Complex(0.0) || yb != Complex(0.0)) {
    const Complex d = za * zb - zm * zm;
    const Complex q = 1.0 + ya * za + yb * zb + ya * yb * d;
    t11 = (za + yb * d) / q;
    t22 = (zb + ya * d) / q;
    t12 = zm / q;
  }

  const Complex a11 = ze_a + t11;
  const Complex a22 = ze_b + t22;
  const Complex det = a11 * a22 - t12 * t12;
  const Complex vs = link.v_source;

  MeshSolution sol;
  sol.source_current = vs * a22 / det;
  sol.load_current = -vs * t12 / det;
  sol.load_voltage = -link.r_load * sol.load_current;
  return sol;
}

Complex transfer_ratio_untuned(const LinkCircuit& link, double frequency) {
  require_frequency(frequency);
  const double w = 2.0 * kPi * frequency;
  const Complex jw(0.0, w);
  const Complex num = jw * link.mutual * link.r_load;
  const Complex den = (jw * link.l_tx + link.r_source) * (jw * link.l_rx + link.r_load) +
                      w * w * link.mutual * link.mutual;
  return num / den;
}

Complex transfer_ratio(const LinkCircuit& link, double frequency) {
  return solve_mesh(link, frequency).load_voltage / link.v_source;
}

Complex input_impedance(const LinkCircuit& link, double frequency) {
  return link.v_source / solve_mesh(link, frequency).source_current - link.r_source;
}

TuningResult tune_capacitance(double inductance, double f0, std::optional<double> parasitic) {
  require(inductance > 0, "inductance must be > 0");
  require_frequency(f0);
  const double w = 2.0 * kPi * f0;
  TuningResult r{1.0 / (w * w * inductance)};
  r.below_parasitic = parasitic.has_value() && *parasitic >= r.capacitance;
  return r;
}

double receiver_capacitance(double l_tx, double c_tx, double l_rx) {
  require(l_tx > 0 && c_tx > 0 && l_rx > 0, "receiver_capacitance needs positive values");
  return l_tx * c_tx / l_rx;
}

double resonant_frequency(double inductance, double capacitance) {
  require(inductance > 0 && capacitance > 0, "resonance needs positive L and C");
  return 1.0 / (2.0 * kPi * std::sqrt(inductance * capacitance));
}

std::vector<double> linear_grid(double f_start, double f_stop, std::size_t n) {
  require(n >= 1, "grid needs at least one point");
  require(f_start > 0 && f_stop >= f_start, "grid range must be positive and ordered");
  require(n == 1 || f_stop > f_start, "multi-point grid needs f_stop > f_start");
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = f_start;
    return grid;
  }
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = f_start + (f_stop - f_start) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  grid.back() = f_stop;
  return grid;
}

std::vector<double> log_grid(double start, double stop, std::size_t n) {
  require(n >= 2, "log grid needs at least two points");
  require(start > 0 && stop > start, "log grid range must be positive and ordered");
  std::vector<double> grid(n);
  const double a = std::log10(start), b = std::log10(stop);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.front() = start;
  grid.back() = stop;
  return grid;
}

Spectrum frequency_sweep(const LinkCircuit& link, const std::vector<double>& grid) {
  link.validate();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_frequency(grid[i]);
    require(i == 0 || grid[i] > grid[i - 1], "frequency grid must be strictly increasing");
  }
  Spectrum s;
  s.frequency = grid;
  s.transfer.reserve(grid.size());
  s.z11.reserve(grid.size());
  for (double f : grid) {
    const auto sol = solve_mesh(link, f);
    s.transfer.push_back(sol.load_voltage / link.v_source);
    s.z11.push_back(link.v_source / sol.source_current - link.r_source);
  }
  return s;
}

double extract_inductance(Complex z11, double frequency) {
  require_frequency(frequency);
  if (!(z11.imag() > 0)) {
    throw CapacitiveRegime("Im(Z11) <= 0: the port looks capacitive, no inductance to extract");
  }
  return z11.imag() / (2.0 * kPi * frequency);
}

double received_power(double v_rx, double r_load) {
  require(r_load > 0, "r_load must be > 0");
  return v_rx * v_rx / r_load;
}

double load_power(const LinkCircuit& link, double frequency) {
  const double v_peak = std::abs(solve_mesh(link, frequency).load_voltage);
  return received_power(v_peak / std::sqrt(2.0), link.r_load);
}

double tx_power(const LinkCircuit& link, double frequency) {
  const auto sol = solve_mesh(link, frequency);
  return 0.5 * (link.v_source * std::conj(sol.source_current)).real();
}

double path_loss_db(Complex h) {
  const double mag = std::abs(h);
  if (mag == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(mag);
}

}  // namespace mqslink

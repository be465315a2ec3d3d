#include "mqslink/link_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mqslink/parallel.hpp"

namespace mqslink {

namespace {

std::vector<double> spectrum_db(const Spectrum& s) {
  std::vector<double> db(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) db[i] = path_loss_db(s.transfer[i]);
  return db;
}

// Frequency where the dB curve crosses `level` between grid points a and b.
double crossing(const Spectrum& s, const std::vector<double>& db, std::size_t a, std::size_t b,
                double level) {
  if (!std::isfinite(db[a])) return s.frequency[a];
  const double t = (level - db[a]) / (db[b] - db[a]);
  return s.frequency[a] + t * (s.frequency[b] - s.frequency[a]);
}

double voltage_to_dbv(double volts) { return 20.0 * std::log10(volts); }

}  // namespace

std::size_t peak_index(const Spectrum& spectrum) {
  if (spectrum.size() == 0) throw InvalidArgument("empty spectrum");
  std::size_t best = 0;
  double best_mag = std::abs(spectrum.transfer[0]);
  for (std::size_t i = 1; i < spectrum.size(); ++i) {
    const double m = std::abs(spectrum.transfer[i]);
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  return best;
}

bool has_unique_peak(const Spectrum& spectrum) {
  const std::size_t p = peak_index(spectrum);
  const double peak = std::abs(spectrum.transfer[p]);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (i != p && std::abs(spectrum.transfer[i]) == peak) return false;
  }
  return true;
}

Band band_below_peak(const Spectrum& spectrum, double drop_db) {
  if (!(drop_db > 0)) throw InvalidArgument("band drop must be > 0 dB");
  const auto db = spectrum_db(spectrum);
  const std::size_t p = peak_index(spectrum);
  if (!std::isfinite(db[p])) throw InvalidArgument("spectrum is identically zero");
  const double level = db[p] - drop_db;

  std::size_t lo = 0;
  while (db[lo] < level) ++lo;
  std::size_t hi = db.size() - 1;
  while (db[hi] < level) --hi;

  std::optional<double> f_low, f_high;
  if (lo > 0) f_low = crossing(spectrum, db, lo - 1, lo, level);
  if (hi + 1 < db.size()) f_high = crossing(spectrum, db, hi + 1, hi, level);
  if (!f_low || !f_high) {
    throw TruncatedBand("band at peak - " + std::to_string(drop_db) + " dB extends beyond the grid",
                        f_low, f_high);
  }
  return {*f_low, *f_high, *f_high - *f_low};
}

double snr_db(double signal_dbv, double noise_floor_dbv) { return signal_dbv - noise_floor_dbv; }

double channel_capacity(double bandwidth, double snr_db, SnrConvention convention) {
  if (!(bandwidth > 0)) throw InvalidArgument("bandwidth must be > 0");
  const double divisor = convention == SnrConvention::voltage ? 20.0 : 10.0;
  const double snr_linear = std::pow(10.0, snr_db / divisor);
  return bandwidth * std::log2(1.0 + snr_linear);
}

CapacityReport capacity_report(const Spectrum& spectrum, double v_source, double noise_floor_dbv,
                               SnrConvention convention) {
  const Band band = three_db_bandwidth(spectrum);
  const double signal = path_loss_db(spectrum.transfer[peak_index(spectrum)]) + voltage_to_dbv(v_source);
  const double snr = snr_db(signal, noise_floor_dbv);
  return {band.bandwidth, signal, noise_floor_dbv, snr, channel_capacity(band.bandwidth, snr, convention)};
}

CapacityTable capacity_vs_bandwidth(const Spectrum& spectrum, double v_source,
                                    double noise_floor_dbv, SnrConvention convention) {
  CapacityTable table;
  const double peak = path_loss_db(spectrum.transfer[peak_index(spectrum)]) + voltage_to_dbv(v_source);
  double best = -1.0;
  for (int t = 1; t <= 30; ++t) {
    CapacityRow row;
    row.threshold_db = t;
    row.signal_dbv = peak - t;
    row.snr_db = snr_db(row.signal_dbv, noise_floor_dbv);
    try {
      row.band = band_below_peak(spectrum, t);
      row.capacity = channel_capacity(row.band->bandwidth, row.snr_db, convention);
      if (*row.capacity > best) {
        best = *row.capacity;
        table.best_row = table.rows.size();
      }
    } catch (const TruncatedBand&) {
    }
    table.rows.push_back(row);
  }
  return table;
}

LinkSettings nominal_link_settings() {
  LinkSettings s;
  s.l_tx_override = 35e-6;
  return s;
}

CouplingResult scenario_coupling(const Scenario& sc, const LinkSettings& settings) {
  sc.validate();
  const auto poses = scenario_poses(sc);
  const auto tx = apply_pose(build_filament_coil(sc.tx, settings.segments_per_turn), poses.tx);
  const auto rx = apply_pose(build_filament_coil(sc.rx, settings.segments_per_turn), poses.rx);
  return mutual_inductance(tx, rx, settings.coupling);
}

LinkModel build_link(const Scenario& sc, const LinkSettings& settings, const CouplingResult& coupling,
                     bool tuned) {
  sc.validate();
  LinkModel m;
  m.tx_inductance = estimate_inductance(sc.tx, settings.l_tx_override);
  m.rx_inductance = estimate_inductance(sc.rx, settings.l_rx_override);
  m.coupling = coupling;
  m.coupling.with_inductances(m.tx_inductance.inductance, m.rx_inductance.inductance);

  LinkCircuit& c = m.circuit;
  c.l_tx = m.tx_inductance.inductance;
  c.l_rx = m.rx_inductance.inductance;
  c.r_coil_tx = ac_resistance(sc.tx, sc.tuned_frequency);
  c.r_coil_rx = ac_resistance(sc.rx, sc.tuned_frequency);
  c.esr_mode = settings.esr_mode;
  c.esr_reference_frequency = sc.tuned_frequency;
  c.mutual = coupling.mutual_inductance;
  c.r_source = sc.r_source;
  c.r_load = sc.r_load;
  c.v_source = sc.v_source;
  c.parasitic_tx = sc.tx.parasitic_capacitance;
  c.parasitic_rx = sc.rx.parasitic_capacitance;
  m.tx_tuning = tune_capacitance(c.l_tx, sc.tuned_frequency, c.parasitic_tx);
  if (tuned) {
    c.c_tx = m.tx_tuning.capacitance;
    c.c_rx = receiver_capacitance(c.l_tx, *c.c_tx, c.l_rx);
  }
  c.validate();
  return m;
}

LinkModel build_link(const Scenario& sc, const LinkSettings& settings, bool tuned) {
  return build_link(sc, settings, scenario_coupling(sc, settings), tuned);
}

SweepRow summarize_spectrum(double param, const Spectrum& spectrum, const LinkCircuit& link,
                            const AnalysisOptions& options) {
  SweepRow row;
  row.param = param;
  row.mutual_inductance = link.mutual;
  const std::size_t p = peak_index(spectrum);
  const double peak = path_loss_db(spectrum.transfer[p]);
  if (!std::isfinite(peak)) {
    row.note = "zero transfer";
    return row;
  }
  row.peak_db = peak;
  row.peak_frequency = spectrum.frequency[p];
  const double v_load = std::abs(spectrum.transfer[p]) * link.v_source;
  row.received_power = received_power(v_load / std::sqrt(2.0), link.r_load);
  try {
    const Band band = three_db_bandwidth(spectrum);
    row.bandwidth_3db = band.bandwidth;
    const double snr = snr_db(peak + voltage_to_dbv(link.v_source), options.noise_floor_dbv);
    row.capacity = channel_capacity(band.bandwidth, snr, options.snr_convention);
  } catch (const TruncatedBand&) {
    row.note = "3 dB band truncated by the frequency grid";
  }
  return row;
}

SweepResult misalignment_sweep(const Scenario& sc, const LinkSettings& settings,
                               const AnalysisOptions& options, MisalignmentAxis axis,
                               const std::vector<double>& values) {
  sc.validate();
  SweepResult result;
  result.param_name = to_string(axis);
  result.param_unit = axis == MisalignmentAxis::tx_angle ? "deg" : "m";

  // Tolerates the last-bit error of ranges built by repeated addition.
  const auto within = [](double v, double lo, double hi) {
    const double slack = 1e-12 * std::max(std::abs(lo), std::abs(hi));
    return v >= lo - slack && v <= hi + slack;
  };
  std::vector<Scenario> points;
  for (double v : values) {
    Scenario s = sc;
    switch (axis) {
      case MisalignmentAxis::tx_angle:
        if (!within(v, 0, 90)) throw InvalidArgument("tx_angle sweep values must lie in 0..90 deg");
        s.tx_angle_deg = v;
        break;
      case MisalignmentAxis::lateral:
        if (!within(v, 0, 0.2)) throw InvalidArgument("lateral sweep values must lie in 0..0.2 m");
        s.x_eye = v;
        break;
      case MisalignmentAxis::axial:
        if (!within(v, 0.05, 0.3)) throw InvalidArgument("axial sweep values must lie in 0.05..0.3 m");
        s.z_eye = v;
        break;
    }
    points.push_back(s);
  }
  if (std::any_of(points.begin(), points.end(), [](const Scenario& s) { return s.x_eye == 0.0; })) {
    result.warnings.push_back("x_eye = 0 places the lens on the necklace axis, not a practical placement");
  }

  // Tuning depends only on the inductances and the tuned frequency, so one
  // uncoupled build fixes the capacitors for every sweep point.
  CouplingResult uncoupled{0.0, 0.0, settings.coupling.method, 0.0, 0};
  const LinkCircuit nominal = build_link(sc, settings, uncoupled, true).circuit;

  result.rows.resize(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const double param = values[i];
    try {
      const auto coupling = scenario_coupling(points[i], settings);
      LinkCircuit link = nominal;
      link.mutual = coupling.mutual_inductance;
      link.validate();
      result.rows[i] = summarize_spectrum(param, frequency_sweep(link, options.grid), link, options);
    } catch (const Error& e) {
      SweepRow row;
      row.param = param;
      row.note = e.what();
      result.rows[i] = row;
    }
  });
  for (const auto& row : result.rows) {
    if (!row.note.empty()) {
      result.warnings.push_back(result.param_name + " = " + std::to_string(row.param) + ": " + row.note);
    }
  }
  return result;
}

ImpedanceSweep impedance_sweep(const LinkCircuit& link, const std::vector<double>& r_source_values,
                               const std::vector<double>& r_load_values,
                               const AnalysisOptions& options) {
  link.validate();
  auto run = [&](const std::vector<double>& values, double LinkCircuit::*field, const char* name) {
    SweepResult r;
    r.param_name = name;
    r.param_unit = "ohm";
    for (double v : values) {
      if (!(v > 0)) throw InvalidArgument(std::string(name) + " values must be > 0");
      LinkCircuit l = link;
      l.*field = v;
      r.rows.push_back(summarize_spectrum(v, frequency_sweep(l, options.grid), l, options));
      if (!r.rows.back().note.empty()) {
        r.warnings.push_back(std::string(name) + " = " + std::to_string(v) + ": " + r.rows.back().note);
      }
    }
    return r;
  };
  return {run(r_source_values, &LinkCircuit::r_source, "r_source"),
          run(r_load_values, &LinkCircuit::r_load, "r_load")};
}

std::vector<double> default_load_grid() { return log_grid(1.0, 1e5, 101); }

DualModeReport dual_mode_report(const LinkCircuit& link, double frequency,
                                const std::vector<double>& r_load_grid) {
  link.validate();
  if (r_load_grid.empty()) throw InvalidArgument("load grid is empty");
  std::vector<double> v(r_load_grid.size()), p(r_load_grid.size());
  for (std::size_t i = 0; i < r_load_grid.size(); ++i) {
    if (!(r_load_grid[i] > 0)) throw InvalidArgument("load grid values must be > 0");
    LinkCircuit l = link;
    l.r_load = r_load_grid[i];
    v[i] = std::abs(solve_mesh(l, frequency).load_voltage);
    p[i] = received_power(v[i] / std::sqrt(2.0), l.r_load);
  }
  const std::size_t ip = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  const double v_sat = *std::max_element(v.begin(), v.end());
  std::size_t ic = 0;
  while (v[ic] < 0.95 * v_sat) ++ic;
  return {frequency, r_load_grid[ip], r_load_grid[ic], p[ip], p[ic], v[ip], v[ic]};
}

const char* to_string(MisalignmentAxis axis) {
  switch (axis) {
    case MisalignmentAxis::tx_angle: return "tx_angle";
    case MisalignmentAxis::lateral: return "lateral";
    case MisalignmentAxis::axial: return "axial";
  }
  return "unknown";
}

const char* to_string(SnrConvention c) { return c == SnrConvention::voltage ? "voltage" : "power"; }

}  // namespace mqslink

// Acceptance checks for the lumped/filament link model. Prints one line per
// criterion and exits non-zero if any of them fails.
//
//   mqslink_acceptance <corpus-dir> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mqslink/circuit.hpp"
#include "mqslink/config.hpp"
#include "mqslink/field_coupling.hpp"
#include "mqslink/link_analysis.hpp"
#include "mqslink/lumped.hpp"
#include "mqslink/parallel.hpp"
#include "mqslink/run.hpp"
#include "test_support.hpp"

using namespace mqslink;
using mqslink::testing::Gen;
using mqslink::testing::rel_err;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Nominal link at full resolution, shared by several criteria.
struct Nominal {
  Scenario scenario = nominal_scenario();
  LinkSettings settings = nominal_link_settings();
  AnalysisOptions options;
  CouplingResult coupling{};
  LinkModel tuned;
  LinkModel untuned;
  double build_and_sweep_s = 0;
  Spectrum tuned_spectrum;
  Spectrum untuned_spectrum;

  Nominal() {
    const auto t0 = Clock::now();
    coupling = scenario_coupling(scenario, settings);
    tuned = build_link(scenario, settings, coupling, true);
    untuned = build_link(scenario, settings, coupling, false);
    tuned_spectrum = frequency_sweep(tuned.circuit, options.grid);
    untuned_spectrum = frequency_sweep(untuned.circuit, options.grid);
    build_and_sweep_s = seconds_since(t0);
  }
};

const Nominal& nominal() {
  static const Nominal n;
  return n;
}

double max_db(const Spectrum& s) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& h : s.transfer) m = std::max(m, path_loss_db(h));
  return m;
}

Verdict rx_inductance() {
  const auto rx = nominal_rx_spec();
  const auto t0 = Clock::now();
  const double l = current_sheet_inductance(rx);
  const double dt = seconds_since(t0);
  const bool ok = l >= 0.32e-6 && l <= 0.48e-6 && dt < 1e-3;
  return {ok, fmt("L_rx = %.4g uH", l * 1e6) + fmt(", %.3g us", dt * 1e6)};
}

Verdict tx_discrepancy() {
  const auto tx = nominal_tx_spec();
  const double l = current_sheet_inductance(tx);
  const auto est = estimate_inductance(tx);
  const auto& link = nominal().tuned;
  const bool overridden = link.tx_inductance.source == InductanceSource::user_supplied &&
                          link.tx_inductance.inductance == 35e-6 && link.circuit.l_tx == 35e-6;
  const bool ok = l < 15e-6 && est.validity == Validity::low_confidence && overridden;
  return {ok, fmt("formula L_tx = %.4g uH", l * 1e6) + " (" + to_string(est.validity) + "), scenario uses " +
                  fmt("%.4g uH", link.circuit.l_tx * 1e6)};
}

Verdict tuning() {
  const double c = tune_capacitance(35e-6, 26e6).capacitance;
  const double l_rx = current_sheet_inductance(nominal_rx_spec());
  const double c_rx = receiver_capacitance(35e-6, c, l_rx);
  const double f_tx = resonant_frequency(35e-6, c);
  const double f_rx = resonant_frequency(l_rx, c_rx);
  const double mismatch = rel_err(f_tx, f_rx);
  const bool ok = std::abs(c / 1.07e-12 - 1) <= 0.01 && mismatch <= 1e-12;
  return {ok, fmt("C_tx = %.5g pF", c * 1e12) + fmt(", f0 mismatch %.2g", mismatch)};
}

struct Pair {
  FilamentCoil tx;
  FilamentCoil rx;
};

Pair random_pair(Gen& g, int spt) {
  for (;;) {
    auto tx_spec = g.coil(0.02, 0.08);
    auto rx_spec = g.coil(0.002, 0.008);
    Pose tx_pose;
    tx_pose.tilt_deg = g.uniform(0, 180);
    tx_pose.tilt_axis = g.unit_vector();
    Pose rx_pose = g.pose(0.0);
    rx_pose.center = g.unit_vector() * g.uniform(0.03, 0.25);
    auto tx = apply_pose(build_filament_coil(tx_spec, spt), tx_pose);
    auto rx = apply_pose(build_filament_coil(rx_spec, spt), rx_pose);
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& v : tx.vertices()) clearance = std::min(clearance, (v - rx_pose.center).norm());
    if (clearance < 4 * rx_spec.outer_diameter()) continue;
    // Skip near-cancelling orientations where a relative error is meaningless.
    const Vec3 b = b_field(tx, 1.0, rx.origin());
    if (std::abs(b.normalized().dot(rx.axis())) < 0.3) continue;
    return {std::move(tx), std::move(rx)};
  }
}

Verdict coupling_kernel() {
  const auto t0 = Clock::now();
  double worst_oracle = 0;
  for (double r2 : {0.05, 0.2, 1.0}) {
    for (double z : {0.5, 1.0, 5.0}) {
      Pose p;
      p.center = Vec3(0, 0, z);
      const double m = mutual_inductance(make_loop(1.0, 720), apply_pose(make_loop(r2, 720), p)).mutual_inductance;
      worst_oracle = std::max(worst_oracle, rel_err(m, coaxial_mutual_oracle(1.0, r2, z)));
    }
  }
  Gen g(2024);
  double worst_flux = 0;
  double worst_recip = 0;
  for (int i = 0; i < 50; ++i) {
    const auto pair = random_pair(g, 120);
    CouplingOptions neumann;
    neumann.tolerance = 1e-4;
    CouplingOptions flux;
    flux.method = CouplingMethod::flux;
    const double mn = mutual_inductance(pair.tx, pair.rx, neumann).mutual_inductance;
    const double mf = mutual_inductance(pair.tx, pair.rx, flux).mutual_inductance;
    const double back = mutual_inductance(pair.rx, pair.tx, neumann).mutual_inductance;
    worst_flux = std::max(worst_flux, rel_err(mn, mf));
    worst_recip = std::max(worst_recip, rel_err(mn, back));
  }
  const double dt = seconds_since(t0);
  const bool ok = worst_oracle < 1e-3 && worst_flux < 1e-2 && worst_recip < 5e-3 && dt < 60;
  return {ok, fmt("oracle %.2g", worst_oracle) + fmt(", flux %.2g", worst_flux) +
                  fmt(", reciprocity %.2g", worst_recip) + fmt(", %.1f s", dt)};
}

Verdict circuit_reduction() {
  Gen g(1000);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    LinkCircuit c;
    c.l_tx = g.log_uniform(1e-7, 1e-4);
    c.l_rx = g.log_uniform(1e-8, 1e-5);
    c.mutual = (g.uniform(0, 1) < 0.5 ? -1 : 1) * g.uniform(0.0, 0.9) * std::sqrt(c.l_tx * c.l_rx);
    c.r_source = g.log_uniform(1, 1e3);
    c.r_load = g.log_uniform(1, 1e5);
    c.v_source = g.uniform(0.1, 10);
    const double f = g.log_uniform(1e4, 1e9);
    const Complex full = transfer_ratio(c, f);
    const Complex closed = transfer_ratio_untuned(c, f);
    if (closed != Complex(0, 0)) worst = std::max(worst, std::abs(full - closed) / std::abs(closed));
  }
  return {worst <= 1e-12, fmt("worst relative deviation %.2g over 1000 links", worst)};
}

Verdict resonant_gain() {
  const auto& n = nominal();
  const double tuned = max_db(n.tuned_spectrum);
  const double flat = max_db(n.untuned_spectrum);
  const bool ok = tuned - flat >= 20.0 && n.build_and_sweep_s < 10.0 && n.tuned_spectrum.size() == 1001;
  return {ok, fmt("peak %.2f dB", tuned) + fmt(" vs flatband %.2f dB", flat) + fmt(" (gain %.1f dB)", tuned - flat) +
                  fmt(", coupling + 2 sweeps %.2f s", n.build_and_sweep_s)};
}

Verdict robustness() {
  const auto& n = nominal();
  const auto angles = misalignment_sweep(n.scenario, n.settings, n.options, MisalignmentAxis::tx_angle,
                                         {20, 30, 40, 50, 60});
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  bool complete = true;
  for (const auto& r : angles.rows) {
    if (!r.peak_db) {
      complete = false;
      continue;
    }
    lo = std::min(lo, *r.peak_db);
    hi = std::max(hi, *r.peak_db);
  }
  std::vector<double> axial_values;
  for (int mm = 100; mm <= 300; mm += 25) axial_values.push_back(mm / 1000.0);
  const auto axial = misalignment_sweep(n.scenario, n.settings, n.options, MisalignmentAxis::axial, axial_values);
  bool monotone = true;
  for (std::size_t i = 1; i < axial.rows.size(); ++i) {
    const auto& a = axial.rows[i - 1].peak_db;
    const auto& b = axial.rows[i].peak_db;
    if (!a || !b || !(*b < *a)) monotone = false;
  }
  const bool ok = complete && hi - lo <= 10.0 && monotone;
  return {ok, fmt("tx_angle 20..60 deg spread %.2f dB", hi - lo) + ", axial 100..300 mm " +
                  (monotone ? "monotone decreasing" : "NOT monotone")};
}

Verdict capacity() {
  const double c = channel_capacity(1e6, snr_db(-55, -85), SnrConvention::voltage);
  const auto table = capacity_vs_bandwidth(nominal().tuned_spectrum, 1.0, kDefaultNoiseFloorDbv);
  const auto& r3 = table.rows.at(2);
  const auto& r12 = table.rows.at(11);
  const bool shape = r3.threshold_db == 3 && r12.threshold_db == 12 && r3.capacity && r12.capacity &&
                     *r12.capacity > *r3.capacity;
  const bool ok = std::abs(c / 5.03e6 - 1) <= 1e-3 && c >= 4.5e6 && shape;
  std::string detail = fmt("C(1 MHz, 30 dB) = %.6g Mbit/s", c / 1e6);
  if (r3.capacity && r12.capacity) {
    detail += fmt(", nominal 12 dB %.4g Mbit/s", *r12.capacity / 1e6) + fmt(" vs 3 dB %.4g Mbit/s", *r3.capacity / 1e6);
  } else {
    detail += ", nominal 3/12 dB rows masked";
  }
  return {ok, detail};
}

Verdict impedance() {
  const auto& n = nominal();
  const std::vector<double> sources{10, 25, 50, 100, 200, 500, 1000};
  const std::vector<double> loads{1000, 10000};
  const auto sw = impedance_sweep(n.tuned.circuit, sources, loads, n.options);
  bool decreasing = true;
  for (std::size_t i = 1; i < sw.source.rows.size(); ++i) {
    const auto& a = sw.source.rows[i - 1].peak_db;
    const auto& b = sw.source.rows[i].peak_db;
    if (!a || !b || !(*b < *a)) decreasing = false;
  }
  double change = std::numeric_limits<double>::infinity();
  if (sw.load.rows[0].peak_db && sw.load.rows[1].peak_db) {
    const double v1 = std::pow(10.0, *sw.load.rows[0].peak_db / 20);
    const double v10 = std::pow(10.0, *sw.load.rows[1].peak_db / 20);
    change = std::abs(v10 - v1) / v1;
  }
  const double p = tx_power(n.tuned.circuit, n.scenario.tuned_frequency);
  const bool ok = decreasing && change < 0.10 && p >= 5e-3 && p <= 20e-3;
  return {ok, std::string("V_rx vs R_source ") + (decreasing ? "strictly decreasing" : "NOT decreasing") +
                  fmt(", 1k->10k load change %.2f%%", change * 100) + fmt(", tx_power %.3g mW", p * 1e3)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every circuit a corpus config sweeps: nominal tuned/untuned, each
// misalignment point with the nominal capacitors, each impedance point.
std::vector<LinkCircuit> corpus_circuits(const ScenarioConfig& cfg) {
  const auto coupling = scenario_coupling(cfg.scenario, cfg.settings);
  const auto tuned = build_link(cfg.scenario, cfg.settings, coupling, true).circuit;
  std::vector<LinkCircuit> out{tuned, build_link(cfg.scenario, cfg.settings, coupling, false).circuit};
  for (const auto& r : cfg.requests) {
    for (double v : r.values) {
      LinkCircuit c = tuned;
      if (r.kind == RequestKind::misalignment) {
        Scenario s = cfg.scenario;
        if (r.axis == MisalignmentAxis::tx_angle) s.tx_angle_deg = v;
        if (r.axis == MisalignmentAxis::lateral) s.x_eye = v;
        if (r.axis == MisalignmentAxis::axial) s.z_eye = v;
        c.mutual = scenario_coupling(s, cfg.settings).mutual_inductance;
      } else if (r.kind == RequestKind::impedance) {
        (r.impedance_param == "r_load" ? c.r_load : c.r_source) = v;
      } else {
        continue;
      }
      out.push_back(c);
    }
  }
  return out;
}

Verdict determinism_and_passivity(const fs::path& corpus, const fs::path& scratch) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(corpus)) {
    if (e.path().extension() == ".ini") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) return {false, "no corpus configs in " + corpus.string()};

  std::size_t compared = 0;
  std::size_t checked = 0;
  std::string problem;
  for (const auto& f : files) {
    const auto cfg = parse_config(f);
    const auto name = f.stem().string();
    std::vector<RunReport> reports;
    std::vector<fs::path> dirs;
    for (std::size_t threads : {1u, 1u, 3u}) {
      set_thread_count(threads);
      const auto dir = scratch / (name + "_" + std::to_string(dirs.size()));
      fs::remove_all(dir);
      reports.push_back(run_scenario(cfg, dir));
      dirs.push_back(dir);
    }
    set_thread_count(1);
    if (reports[0].any_failed() && problem.empty()) problem = name + ": a request failed";
    for (std::size_t k = 1; k < reports.size(); ++k) {
      if (report_json(reports[k], false) != report_json(reports[0], false) && problem.empty()) {
        problem = name + ": report differs";
      }
      for (const auto& r : reports[0].requests) {
        for (const auto& out : r.outputs) {
          ++compared;
          if (slurp(dirs[k] / out) != slurp(dirs[0] / out) && problem.empty()) problem = name + "/" + out + " differs";
        }
      }
    }

    const auto grid = cfg.analysis_options().grid;
    for (const auto& c : corpus_circuits(cfg)) {
      for (double freq : grid) {
        ++checked;
        const double pin = tx_power(c, freq);
        const double pout = load_power(c, freq);
        if (!(pin >= pout) && problem.empty()) problem = name + fmt(": load power exceeds input at %.6g Hz", freq);
      }
    }
  }
  const bool ok = problem.empty();
  std::string detail = std::to_string(files.size()) + " configs, " + std::to_string(compared) +
                       " file comparisons, " + std::to_string(checked) + " passivity points";
  if (!ok) detail += "; " + problem;
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <corpus-dir> <scratch-dir>\n", argv[0]);
    return 2;
  }
  const fs::path corpus = argv[1];
  const fs::path scratch = argv[2];
  set_thread_count(1);

  struct Criterion {
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria{
      {"rx inductance", rx_inductance},
      {"tx inductance discrepancy", tx_discrepancy},
      {"tuning", tuning},
      {"coupling kernel", coupling_kernel},
      {"circuit reduction", circuit_reduction},
      {"resonant gain", resonant_gain},
      {"robustness", robustness},
      {"capacity", capacity},
      {"impedance study", impedance},
      {"determinism and passivity", [&] { return determinism_and_passivity(corpus, scratch); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v{false, ""};
    try {
      v = criteria[i].check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

#include "mqslink/run.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <utility>

#include "json.hpp"

#include "mqslink/lumped.hpp"
#include "mqslink/output.hpp"

namespace mqslink {

using nlohmann::json;

bool RunReport::any_failed() const {
  for (const auto& r : requests) {
    if (!r.ok) return true;
  }
  return false;
}

std::string report_json(const RunReport& report, bool include_timings) {
  json j;
  j["schema_version"] = report.schema_version;
  j["artifact_version"] = report.artifact_version;
  j["config_digest"] = report.config_digest;
  j["requests"] = json::array();
  for (const auto& r : report.requests) {
    json jr;
    jr["name"] = r.name;
    jr["kind"] = r.kind;
    jr["status"] = r.ok ? "ok" : "failed";
    jr["outputs"] = r.outputs;
    jr["warnings"] = r.warnings;
    jr["error"] = r.ok ? json(nullptr) : json(r.error);
    jr["metrics"] = r.metrics;
    j["requests"].push_back(std::move(jr));
  }
  j["warnings"] = report.warnings;
  if (include_timings) j["timings_ms"] = report.timings_ms;
  return j.dump(2) + '\n';
}

RunReport parse_report_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw Error("unsupported report schema version " + std::to_string(r.schema_version));
    }
    r.artifact_version = j.at("artifact_version").get<std::string>();
    r.config_digest = j.at("config_digest").get<std::string>();
    for (const auto& jr : j.at("requests")) {
      RequestOutcome o;
      o.name = jr.at("name").get<std::string>();
      o.kind = jr.at("kind").get<std::string>();
      o.ok = jr.at("status").get<std::string>() == "ok";
      o.outputs = jr.at("outputs").get<std::vector<std::string>>();
      o.warnings = jr.at("warnings").get<std::vector<std::string>>();
      if (!o.ok) o.error = jr.at("error").get<std::string>();
      o.metrics = jr.at("metrics").get<std::map<std::string, double>>();
      r.requests.push_back(std::move(o));
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("timings_ms")) r.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

void emit_report_json(const RunReport& report, const std::filesystem::path& path) {
  write_file_atomic(path, report_json(report));
}

namespace {

// Shared, lazily built nominal link. A failure is remembered so that every
// dependent request reports the same cause.
class LinkCache {
 public:
  explicit LinkCache(const ScenarioConfig& c) : config_(c) {}

  const LinkModel& get(bool tuned) {
    if (error_) throw Error(*error_);
    try {
      if (!coupling_) coupling_ = scenario_coupling(config_.scenario, config_.settings);
      auto& slot = tuned ? tuned_ : untuned_;
      if (!slot) slot = build_link(config_.scenario, config_.settings, *coupling_, tuned);
      return *slot;
    } catch (const Error& e) {
      if (!coupling_) error_ = std::string("coupling: ") + e.what();
      throw;
    }
  }

 private:
  const ScenarioConfig& config_;
  std::optional<CouplingResult> coupling_;
  std::optional<LinkModel> tuned_, untuned_;
  std::optional<std::string> error_;
};

json coil_json(const CoilSpec& spec, const std::optional<double>& override_l, double f0,
               std::vector<std::string>& warnings, const std::string& label) {
  json j;
  const double cs = current_sheet_inductance(spec);
  const auto wv = wheeler_validity(spec);
  j["current_sheet_inductance_h"] = cs;
  j["fill_factor"] = fill_factor(spec);
  if (spec.shape == CoilShape::flat_spiral) {
    const auto w = wheeler_inductance(spec);
    j["wheeler_inductance_h"] = w.inductance;
  } else {
    j["wheeler_inductance_h"] = nullptr;
  }
  j["wheeler_fill_ratio"] = wv.fill_ratio;
  const auto est = estimate_inductance(spec);
  j["formula_validity"] = to_string(est.validity);
  if (est.validity == Validity::low_confidence) {
    warnings.push_back(label + " inductance formulas are low-confidence for this geometry" +
                       (override_l ? " (override in use)" : ""));
  }
  const auto lc = lumped_coil(spec, f0, override_l);
  j["inductance_h"] = lc.inductance;
  j["inductance_source"] = to_string(lc.source);
  j["series_resistance_ohm"] = lc.series_resistance;
  j["quality_factor"] = lc.quality_factor;
  j["skin_depth_m"] = lc.skin_depth;
  j["outer_diameter_m"] = spec.outer_diameter();
  return j;
}

void run_request(const ScenarioConfig& cfg, const Request& req, const std::filesystem::path& dir, LinkCache& links,
                 RequestOutcome& out) {
  const auto opts = cfg.analysis_options();
  const auto& sc = cfg.scenario;
  auto write = [&](const std::string& content) {
    write_file_atomic(dir / req.output, content);
    out.outputs.push_back(req.output);
  };
  auto write_sweep = [&](const SweepResult& sw) {
    out.warnings.insert(out.warnings.end(), sw.warnings.begin(), sw.warnings.end());
    std::size_t masked = 0;
    for (const auto& row : sw.rows) masked += row.note.empty() ? 0 : 1;
    out.metrics["rows"] = static_cast<double>(sw.rows.size());
    out.metrics["masked_rows"] = static_cast<double>(masked);
    write(sweep_csv(sw));
  };

  switch (req.kind) {
    case RequestKind::spectrum: {
      const auto& link = links.get(req.tuned);
      const auto spectrum = frequency_sweep(link.circuit, opts.grid);
      std::size_t zero = 0;
      for (const auto& h : spectrum.transfer) zero += std::abs(h) == 0.0 ? 1 : 0;
      if (zero) out.warnings.push_back(std::to_string(zero) + " frequencies with zero transfer have empty h_mag_db");
      const std::size_t p = peak_index(spectrum);
      out.metrics["peak_db"] = path_loss_db(spectrum.transfer[p]);
      out.metrics["peak_frequency_hz"] = spectrum.frequency[p];
      out.metrics["mutual_inductance_h"] = link.circuit.mutual;
      write(spectrum_csv(spectrum));
      break;
    }
    case RequestKind::capacity: {
      const auto& link = links.get(true);
      const auto spectrum = frequency_sweep(link.circuit, opts.grid);
      const auto table = capacity_vs_bandwidth(spectrum, link.circuit.v_source, opts.noise_floor_dbv,
                                               opts.snr_convention);
      for (const auto& row : table.rows) {
        if (!row.capacity) {
          out.warnings.push_back("threshold " + format_double(row.threshold_db) +
                                 " dB: band truncated by the frequency grid, capacity masked");
        }
      }
      if (table.best_row) {
        const auto& best = table.rows[*table.best_row];
        out.metrics["best_threshold_db"] = best.threshold_db;
        out.metrics["best_capacity_bps"] = *best.capacity;
      }
      write(capacity_csv(table));
      break;
    }
    case RequestKind::misalignment:
      write_sweep(misalignment_sweep(sc, cfg.settings, opts, req.axis, req.values));
      break;
    case RequestKind::impedance: {
      const auto& link = links.get(true);
      const bool source = req.impedance_param == "r_source";
      const auto both = impedance_sweep(link.circuit, source ? req.values : std::vector<double>{},
                                        source ? std::vector<double>{} : req.values, opts);
      write_sweep(source ? both.source : both.load);
      break;
    }
    case RequestKind::dual_mode: {
      const auto& link = links.get(true);
      const auto grid = default_load_grid();
      const auto d = dual_mode_report(link.circuit, sc.tuned_frequency, grid);
      for (const auto& [mode, r] : {std::pair{"power", d.power_mode_r_load}, std::pair{"comm", d.comm_mode_r_load}}) {
        if (r == grid.front() || r == grid.back()) {
          out.warnings.push_back(std::string(mode) + "-mode load " + format_double(r) +
                                 " ohm sits on the edge of the load grid; the optimum may lie outside it");
        }
      }
      json j;
      j["frequency_hz"] = d.frequency;
      j["power_mode"] = {{"r_load_ohm", d.power_mode_r_load}, {"p_rx_w", d.power_mode_p_rx}, {"v_rx_v", d.power_mode_v_rx}};
      j["comm_mode"] = {{"r_load_ohm", d.comm_mode_r_load}, {"p_rx_w", d.comm_mode_p_rx}, {"v_rx_v", d.comm_mode_v_rx}};
      out.metrics["power_mode_r_load_ohm"] = d.power_mode_r_load;
      out.metrics["comm_mode_r_load_ohm"] = d.comm_mode_r_load;
      write(j.dump(2) + '\n');
      break;
    }
    case RequestKind::field_map: {
      const auto poses = scenario_poses(sc);
      const bool tx = req.coil == "tx";
      const auto coil =
          apply_pose(build_filament_coil(tx ? sc.tx : sc.rx, cfg.settings.segments_per_turn), tx ? poses.tx : poses.rx);
      const auto samples = field_map(coil, req.current, req.grid);
      std::size_t masked = 0;
      for (const auto& s : samples) masked += s.b ? 0 : 1;
      if (masked) out.warnings.push_back(std::to_string(masked) + " grid points inside the wire have empty B cells");
      out.metrics["samples"] = static_cast<double>(samples.size());
      out.metrics["masked_samples"] = static_cast<double>(masked);
      write(field_map_csv(samples));
      break;
    }
    case RequestKind::lumped: {
      const auto& link = links.get(true);
      json j;
      j["frequency_hz"] = sc.tuned_frequency;
      j["tx"] = coil_json(sc.tx, cfg.settings.l_tx_override, sc.tuned_frequency, out.warnings, "tx");
      j["rx"] = coil_json(sc.rx, cfg.settings.l_rx_override, sc.tuned_frequency, out.warnings, "rx");
      const auto& c = link.circuit;
      j["tuning"] = {{"c_tx_f", *c.c_tx}, {"c_rx_f", *c.c_rx}, {"below_parasitic", link.tx_tuning.below_parasitic}};
      if (link.tx_tuning.below_parasitic) {
        out.warnings.push_back("tx tuning capacitance is below the coil's parasitic capacitance");
      }
      j["coupling"] = {{"mutual_inductance_h", link.coupling.mutual_inductance},
                       {"coupling_coefficient", link.coupling.coupling},
                       {"method", to_string(link.coupling.method)},
                       {"convergence_estimate", link.coupling.convergence_estimate},
                       {"refinement_level", link.coupling.refinement_level}};
      j["tx_power_w"] = tx_power(c, sc.tuned_frequency);
      j["load_power_w"] = load_power(c, sc.tuned_frequency);
      out.metrics["mutual_inductance_h"] = link.coupling.mutual_inductance;
      out.metrics["coupling_coefficient"] = link.coupling.coupling;
      out.metrics["tx_power_w"] = j["tx_power_w"].get<double>();
      write(j.dump(2) + '\n');
      break;
    }
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir, const RunOptions& options) {
  const auto t_start = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());

  RunReport report;
  report.config_digest = config_digest(config);
  for (const auto* side : {"tx", "rx"}) {
    const bool tx = side[0] == 't';
    const auto& ov = tx ? config.settings.l_tx_override : config.settings.l_rx_override;
    if (!ov && estimate_inductance(tx ? config.scenario.tx : config.scenario.rx).validity == Validity::low_confidence) {
      report.warnings.push_back(std::string(side) + " inductance comes from a low-confidence formula estimate");
    }
  }

  LinkCache links(config);
  for (const auto& req : config.requests) {
    if (options.progress) options.progress(req.name);
    const auto t0 = std::chrono::steady_clock::now();
    RequestOutcome out;
    out.name = req.name;
    out.kind = to_string(req.kind);
    try {
      run_request(config, req, out_dir, links, out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
      out.outputs.clear();
      out.metrics.clear();
      out.warnings.clear();
    }
    report.timings_ms[req.name] = elapsed_ms(t0);
    report.requests.push_back(std::move(out));
  }
  report.timings_ms["total"] = elapsed_ms(t_start);
  if (options.write_report) emit_report_json(report, out_dir / kReportFileName);
  return report;
}

}  // namespace mqslink

#include "mqslink/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include "mqslink/constants.hpp"

namespace mqslink {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : InvalidArgument(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

namespace {

enum class Dim {
  length, frequency, resistance, inductance, capacitance, voltage, current,
  angle, conductivity, level, count, ratio,
};

struct UnitDef {
  std::string_view name;
  Dim dim;
  double factor;
};

constexpr UnitDef kUnits[] = {
    {"m", Dim::length, 1.0},          {"cm", Dim::length, 1e-2},
    {"mm", Dim::length, 1e-3},        {"um", Dim::length, 1e-6},
    {"Hz", Dim::frequency, 1.0},      {"kHz", Dim::frequency, 1e3},
    {"MHz", Dim::frequency, 1e6},     {"GHz", Dim::frequency, 1e9},
    {"ohm", Dim::resistance, 1.0},    {"kohm", Dim::resistance, 1e3},
    {"Mohm", Dim::resistance, 1e6},   {"\xCE\xA9", Dim::resistance, 1.0},
    {"k\xCE\xA9", Dim::resistance, 1e3},
    {"H", Dim::inductance, 1.0},      {"mH", Dim::inductance, 1e-3},
    {"uH", Dim::inductance, 1e-6},    {"nH", Dim::inductance, 1e-9},
    {"F", Dim::capacitance, 1.0},     {"uF", Dim::capacitance, 1e-6},
    {"nF", Dim::capacitance, 1e-9},   {"pF", Dim::capacitance, 1e-12},
    {"fF", Dim::capacitance, 1e-15},
    {"V", Dim::voltage, 1.0},         {"mV", Dim::voltage, 1e-3},
    {"A", Dim::current, 1.0},         {"mA", Dim::current, 1e-3},
    {"deg", Dim::angle, 1.0},         {"rad", Dim::angle, 180.0 / kPi},
    {"S/m", Dim::conductivity, 1.0},  {"MS/m", Dim::conductivity, 1e6},
    {"dBV", Dim::level, 1.0},
    {"turns", Dim::count, 1.0},       {"segments", Dim::count, 1.0},
    {"points", Dim::count, 1.0},      {"count", Dim::count, 1.0},
    {"rel", Dim::ratio, 1.0},
};

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::length: return "length (m, cm, mm, um)";
    case Dim::frequency: return "frequency (Hz, kHz, MHz, GHz)";
    case Dim::resistance: return "resistance (ohm, kohm, Mohm)";
    case Dim::inductance: return "inductance (H, mH, uH, nH)";
    case Dim::capacitance: return "capacitance (F, uF, nF, pF, fF)";
    case Dim::voltage: return "voltage (V, mV)";
    case Dim::current: return "current (A, mA)";
    case Dim::angle: return "angle (deg, rad)";
    case Dim::conductivity: return "conductivity (S/m, MS/m)";
    case Dim::level: return "level (dBV)";
    case Dim::count: return "count (turns, segments, points, count)";
    case Dim::ratio: return "ratio (rel)";
  }
  return "?";
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string key;
  std::string value;
  int line;
};

struct Section {
  std::string name;
  int line;
  std::vector<Entry> entries;
};

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& msg) const { throw ConfigError(source_, line, msg); }

  std::vector<Section> tokenize(const std::string& text) const {
    std::vector<Section> sections;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string_view s = raw;
      if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
      s = trim(s);
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line, "malformed section header");
        std::string name(trim(s.substr(1, s.size() - 2)));
        if (name.empty()) fail(line, "empty section name");
        if (!seen.insert(name).second) fail(line, "duplicate section [" + name + "]");
        sections.push_back({name, line, {}});
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string_view::npos) fail(line, "expected 'key = value'");
      if (sections.empty()) fail(line, "key outside of any section");
      std::string key(trim(s.substr(0, eq)));
      std::string value(trim(s.substr(eq + 1)));
      if (key.empty()) fail(line, "empty key");
      if (value.empty()) fail(line, "missing value for '" + key + "'");
      for (const auto& e : sections.back().entries) {
        if (e.key == key) fail(line, "duplicate key '" + key + "' in [" + sections.back().name + "]");
      }
      sections.back().entries.push_back({key, value, line});
    }
    return sections;
  }

  double quantity(const Entry& e, Dim dim, std::string_view text) const {
    text = trim(text);
    double number = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), number);
    if (ec != std::errc() || !std::isfinite(number)) fail(e.line, "'" + e.key + "': expected a number");
    const std::string_view unit = trim(std::string_view(ptr, text.data() + text.size() - ptr));
    if (unit.empty()) {
      fail(e.line, "'" + e.key + "': number needs a unit tag, expected " + dim_name(dim));
    }
    for (const auto& u : kUnits) {
      if (u.name == unit) {
        if (u.dim != dim) {
          fail(e.line, "'" + e.key + "': unit '" + std::string(unit) + "' is not a " + dim_name(dim));
        }
        return number * u.factor;
      }
    }
    fail(e.line, "'" + e.key + "': unknown unit '" + std::string(unit) + "'");
  }

  double quantity(const Entry& e, Dim dim) const { return quantity(e, dim, e.value); }

  double positive(const Entry& e, Dim dim) const {
    const double v = quantity(e, dim);
    if (!(v > 0)) fail(e.line, "'" + e.key + "' must be > 0");
    return v;
  }

  double non_negative(const Entry& e, Dim dim) const {
    const double v = quantity(e, dim);
    if (!(v >= 0)) fail(e.line, "'" + e.key + "' must be >= 0");
    return v;
  }

  long count(const Entry& e, long minimum) const {
    const double v = quantity(e, Dim::count);
    if (v != std::floor(v)) fail(e.line, "'" + e.key + "' must be an integer");
    if (v < minimum) fail(e.line, "'" + e.key + "' must be >= " + std::to_string(minimum));
    return static_cast<long>(v);
  }

  std::vector<double> list(const Entry& e, Dim dim) const {
    std::vector<double> out;
    std::string_view rest = e.value;
    while (true) {
      const auto comma = rest.find(',');
      out.push_back(quantity(e, dim, rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  template <typename T>
  T choice(const Entry& e, std::initializer_list<std::pair<std::string_view, T>> options) const {
    std::string allowed;
    for (const auto& [name, value] : options) {
      if (e.value == name) return value;
      allowed += allowed.empty() ? std::string(name) : ", " + std::string(name);
    }
    fail(e.line, "'" + e.key + "': expected one of " + allowed);
  }

  static bool boolean_true(const std::string& v) { return v == "true"; }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

using Handler = std::function<void(const Entry&)>;

void apply_section(const Reader& rd, const Section& sec, const std::map<std::string, Handler>& handlers,
                   const std::vector<std::string>& required, bool allow_defaults) {
  for (const auto& e : sec.entries) {
    const auto it = handlers.find(e.key);
    if (it == handlers.end()) rd.fail(e.line, "unknown key '" + e.key + "' in [" + sec.name + "]");
    it->second(e);
  }
  if (allow_defaults) return;
  for (const auto& key : required) {
    const bool present = std::any_of(sec.entries.begin(), sec.entries.end(),
                                     [&](const Entry& e) { return e.key == key; });
    if (!present) rd.fail(sec.line, "missing key '" + key + "' in [" + sec.name + "]");
  }
}

std::map<std::string, Handler> coil_handlers(const Reader& rd, CoilSpec& spec,
                                             std::optional<double>& inductance) {
  return {
      {"turns", [&](const Entry& e) { spec.turns = static_cast<int>(rd.count(e, 1)); }},
      {"inner_radius", [&](const Entry& e) { spec.inner_radius = rd.positive(e, Dim::length); }},
      {"wire_diameter", [&](const Entry& e) { spec.wire_diameter = rd.positive(e, Dim::length); }},
      {"wire_spacing", [&](const Entry& e) { spec.wire_spacing = rd.non_negative(e, Dim::length); }},
      {"conductivity", [&](const Entry& e) { spec.conductivity = rd.positive(e, Dim::conductivity); }},
      {"shape",
       [&](const Entry& e) {
         spec.shape = rd.choice<CoilShape>(e, {{"flat", CoilShape::flat_spiral}, {"helical", CoilShape::helical}});
       }},
      {"sphere_radius", [&](const Entry& e) { spec.sphere_radius = rd.positive(e, Dim::length); }},
      {"parasitic_capacitance",
       [&](const Entry& e) { spec.parasitic_capacitance = rd.positive(e, Dim::capacitance); }},
      {"inductance", [&](const Entry& e) { inductance = rd.positive(e, Dim::inductance); }},
  };
}

std::vector<double> inclusive_range(const Reader& rd, const Entry& at, double start, double stop, double step) {
  if (!(step > 0)) rd.fail(at.line, "'step' must be > 0");
  if (!(stop >= start)) rd.fail(at.line, "'stop' must be >= 'start'");
  const double span = (stop - start) / step;
  const long n = std::lround(std::floor(span + 1e-9)) + 1;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
  return v;
}

Request parse_request(const Reader& rd, const Section& sec) {
  Request r;
  r.name = sec.name.substr(std::string("request.").size());
  r.line = sec.line;
  if (r.name.empty()) rd.fail(sec.line, "request section needs a name: [request.<name>]");

  const auto kind_it = std::find_if(sec.entries.begin(), sec.entries.end(),
                                    [](const Entry& e) { return e.key == "kind"; });
  if (kind_it == sec.entries.end()) rd.fail(sec.line, "missing key 'kind' in [" + sec.name + "]");
  r.kind = rd.choice<RequestKind>(*kind_it, {{"spectrum", RequestKind::spectrum},
                                             {"capacity", RequestKind::capacity},
                                             {"misalignment", RequestKind::misalignment},
                                             {"impedance", RequestKind::impedance},
                                             {"dual_mode", RequestKind::dual_mode},
                                             {"field_map", RequestKind::field_map},
                                             {"lumped", RequestKind::lumped}});

  std::optional<double> start, stop, step;
  std::optional<long> points;
  const Entry* range_anchor = nullptr;
  Dim range_dim = Dim::length;

  std::map<std::string, Handler> h{
      {"kind", [](const Entry&) {}},
      {"output", [&](const Entry& e) { r.output = e.value; }},
  };
  switch (r.kind) {
    case RequestKind::spectrum:
      h["tuning"] = [&](const Entry& e) { r.tuned = rd.choice<bool>(e, {{"tuned", true}, {"untuned", false}}); };
      break;
    case RequestKind::misalignment:
      h["axis"] = [&](const Entry& e) {
        r.axis = rd.choice<MisalignmentAxis>(e, {{"tx_angle", MisalignmentAxis::tx_angle},
                                                 {"lateral", MisalignmentAxis::lateral},
                                                 {"axial", MisalignmentAxis::axial}});
      };
      break;
    case RequestKind::impedance:
      h["param"] = [&](const Entry& e) {
        r.impedance_param = rd.choice<std::string>(e, {{"r_source", "r_source"}, {"r_load", "r_load"}});
      };
      break;
    case RequestKind::field_map:
      h["coil"] = [&](const Entry& e) { r.coil = rd.choice<std::string>(e, {{"tx", "tx"}, {"rx", "rx"}}); };
      h["plane"] = [&](const Entry& e) {
        r.grid.plane = rd.choice<GridPlane>(e, {{"xy", GridPlane::xy}, {"xz", GridPlane::xz}, {"yz", GridPlane::yz}});
      };
      h["offset"] = [&](const Entry& e) { r.grid.offset = rd.quantity(e, Dim::length); };
      h["u_min"] = [&](const Entry& e) { r.grid.u_min = rd.quantity(e, Dim::length); };
      h["u_max"] = [&](const Entry& e) { r.grid.u_max = rd.quantity(e, Dim::length); };
      h["v_min"] = [&](const Entry& e) { r.grid.v_min = rd.quantity(e, Dim::length); };
      h["v_max"] = [&](const Entry& e) { r.grid.v_max = rd.quantity(e, Dim::length); };
      h["u_points"] = [&](const Entry& e) { r.grid.u_count = static_cast<int>(rd.count(e, 1)); };
      h["v_points"] = [&](const Entry& e) { r.grid.v_count = static_cast<int>(rd.count(e, 1)); };
      h["current"] = [&](const Entry& e) { r.current = rd.quantity(e, Dim::current); };
      break;
    default:
      break;
  }

  // The numeric range keys need the axis/param first to know their dimension.
  for (const auto& e : sec.entries) {
    if (e.key != "axis" && e.key != "param") continue;
    const auto it = h.find(e.key);
    if (it != h.end()) it->second(e);  // otherwise reported as unknown below
  }
  if (r.kind == RequestKind::misalignment || r.kind == RequestKind::impedance) {
    range_dim = r.kind == RequestKind::impedance ? Dim::resistance
                : r.axis == MisalignmentAxis::tx_angle ? Dim::angle
                                                       : Dim::length;
    h["values"] = [&, range_dim](const Entry& e) {
      r.values = rd.list(e, range_dim);
      range_anchor = &e;
    };
    h["start"] = [&, range_dim](const Entry& e) { start = rd.quantity(e, range_dim); range_anchor = &e; };
    h["stop"] = [&, range_dim](const Entry& e) { stop = rd.quantity(e, range_dim); };
    if (r.kind == RequestKind::misalignment) {
      h["step"] = [&, range_dim](const Entry& e) { step = rd.quantity(e, range_dim); };
    } else {
      h["points"] = [&](const Entry& e) { points = rd.count(e, 2); };
    }
  }
  apply_section(rd, sec, h, {}, true);

  if (r.kind == RequestKind::misalignment || r.kind == RequestKind::impedance) {
    const bool have_range = start || stop || step || points;
    if (!r.values.empty() && have_range) rd.fail(sec.line, "give either 'values' or a start/stop range, not both");
    if (r.values.empty()) {
      if (r.kind == RequestKind::misalignment) {
        if (!start || !stop || !step) rd.fail(sec.line, "misalignment request needs 'values' or start/stop/step");
        r.values = inclusive_range(rd, *range_anchor, *start, *stop, *step);
      } else {
        if (!start || !stop || !points) rd.fail(sec.line, "impedance request needs 'values' or start/stop/points");
        if (!(*start > 0 && *stop > *start)) rd.fail(sec.line, "impedance range must be positive and increasing");
        r.values = log_grid(*start, *stop, static_cast<std::size_t>(*points));
      }
    }
  }
  if (r.kind == RequestKind::field_map) {
    try {
      r.grid.validate();
    } catch (const InvalidArgument& e) {
      rd.fail(sec.line, e.what());
    }
  }
  if (r.output.empty()) {
    const bool json = r.kind == RequestKind::dual_mode || r.kind == RequestKind::lumped;
    r.output = r.name + (json ? ".json" : ".csv");
  }
  if (r.output.find('/') != std::string::npos || r.output.find('\\') != std::string::npos ||
      r.output == "." || r.output == "..") {
    rd.fail(sec.line, "'output' must be a plain file name inside the output directory");
  }
  return r;
}

void apply_config(const Reader& rd, const std::vector<Section>& sections, ScenarioConfig& cfg,
                  bool allow_defaults) {
  auto& sc = cfg.scenario;
  auto& st = cfg.settings;
  std::set<std::string> present;
  bool file_has_requests = false;

  for (const auto& sec : sections) {
    present.insert(sec.name);
    if (sec.name == "tx" || sec.name == "rx") {
      const bool is_tx = sec.name == "tx";
      auto& spec = is_tx ? sc.tx : sc.rx;
      auto& l = is_tx ? st.l_tx_override : st.l_rx_override;
      if (!allow_defaults) l.reset();
      apply_section(rd, sec, coil_handlers(rd, spec, l),
                    {"turns", "inner_radius", "wire_diameter", "wire_spacing"}, allow_defaults);
      try {
        spec.validate();
      } catch (const InvalidArgument& e) {
        rd.fail(sec.line, "[" + sec.name + "] " + e.what());
      }
    } else if (sec.name == "placement") {
      apply_section(rd, sec,
                    {{"x_eye", [&](const Entry& e) { sc.x_eye = rd.non_negative(e, Dim::length); }},
                     {"z_eye", [&](const Entry& e) { sc.z_eye = rd.non_negative(e, Dim::length); }},
                     {"tx_angle",
                      [&](const Entry& e) {
                        sc.tx_angle_deg = rd.quantity(e, Dim::angle);
                        if (sc.tx_angle_deg < 0 || sc.tx_angle_deg > 90) rd.fail(e.line, "'tx_angle' must lie in 0..90 deg");
                      }}},
                    {"x_eye", "z_eye", "tx_angle"}, allow_defaults);
    } else if (sec.name == "circuit") {
      apply_section(
          rd, sec,
          {{"r_source", [&](const Entry& e) { sc.r_source = rd.positive(e, Dim::resistance); }},
           {"r_load", [&](const Entry& e) { sc.r_load = rd.positive(e, Dim::resistance); }},
           {"tuned_frequency", [&](const Entry& e) { sc.tuned_frequency = rd.positive(e, Dim::frequency); }},
           {"v_source", [&](const Entry& e) { sc.v_source = rd.positive(e, Dim::voltage); }},
           {"esr_mode",
            [&](const Entry& e) {
              st.esr_mode = rd.choice<EsrMode>(e, {{"fixed", EsrMode::fixed}, {"skin_effect", EsrMode::skin_effect}});
            }}},
          {"r_source", "r_load", "tuned_frequency", "v_source"}, allow_defaults);
    } else if (sec.name == "analysis") {
      apply_section(
          rd, sec,
          {{"sweep_start", [&](const Entry& e) { cfg.sweep_start = rd.positive(e, Dim::frequency); }},
           {"sweep_stop", [&](const Entry& e) { cfg.sweep_stop = rd.positive(e, Dim::frequency); }},
           {"sweep_points", [&](const Entry& e) { cfg.sweep_points = static_cast<std::size_t>(rd.count(e, 1)); }},
           {"noise_floor", [&](const Entry& e) { cfg.noise_floor_dbv = rd.quantity(e, Dim::level); }},
           {"snr_convention",
            [&](const Entry& e) {
              cfg.snr_convention =
                  rd.choice<SnrConvention>(e, {{"voltage", SnrConvention::voltage}, {"power", SnrConvention::power}});
            }},
           {"segments_per_turn",
            [&](const Entry& e) { st.segments_per_turn = static_cast<int>(rd.count(e, kMinSegmentsPerTurn)); }},
           {"coupling_method",
            [&](const Entry& e) {
              st.coupling.method =
                  rd.choice<CouplingMethod>(e, {{"neumann", CouplingMethod::neumann}, {"flux", CouplingMethod::flux}});
            }},
           {"coupling_tolerance", [&](const Entry& e) { st.coupling.tolerance = rd.positive(e, Dim::ratio); }}},
          {}, true);
      const auto& last = sec.entries.empty() ? sec.line : sec.entries.back().line;
      if (!(cfg.sweep_stop >= cfg.sweep_start)) rd.fail(last, "sweep_stop must be >= sweep_start");
      if (cfg.sweep_points > 1 && !(cfg.sweep_stop > cfg.sweep_start)) {
        rd.fail(last, "multi-point sweep needs sweep_stop > sweep_start");
      }
    } else if (sec.name.rfind("request.", 0) == 0) {
      if (!file_has_requests && allow_defaults) cfg.requests.clear();
      file_has_requests = true;
      cfg.requests.push_back(parse_request(rd, sec));
    } else {
      rd.fail(sec.line, "unknown section [" + sec.name + "]");
    }
  }

  std::set<std::string> outputs;
  for (const auto& r : cfg.requests) {
    if (r.output == "report.json") rd.fail(r.line, "output name 'report.json' is reserved");
    if (!outputs.insert(r.output).second) rd.fail(r.line, "output '" + r.output + "' is written by two requests");
  }

  if (!allow_defaults) {
    for (const char* required : {"tx", "rx", "placement", "circuit"}) {
      if (!present.count(required)) rd.fail(1, std::string("missing section [") + required + "]");
    }
  }
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

AnalysisOptions ScenarioConfig::analysis_options() const {
  AnalysisOptions o;
  o.grid = linear_grid(sweep_start, sweep_stop, sweep_points);
  o.noise_floor_dbv = noise_floor_dbv;
  o.snr_convention = snr_convention;
  return o;
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& source_name,
                                 const ParseOptions& options) {
  const Reader rd(source_name);
  const auto sections = rd.tokenize(text);
  ScenarioConfig cfg;
  if (options.allow_defaults) {
    cfg = parse_config_text(default_config_text(), "<defaults>", {});
  } else {
    cfg.settings.l_tx_override.reset();
  }
  apply_config(rd, sections, cfg, options.allow_defaults);
  return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string(), options);
}

std::string default_config_text() {
  return R"(# Necklace transmitter coupled to a contact-lens receiver.
[tx]
turns = 5 turns
inner_radius = 60 mm
wire_diameter = 0.137 mm
wire_spacing = 0.5 mm
conductivity = 5.8e7 S/m
shape = flat
# Formula estimates are unreliable for this sparse winding; use the
# inductance extracted from Z11 instead.
inductance = 35 uH

[rx]
turns = 5 turns
inner_radius = 4 mm
wire_diameter = 0.137 mm
wire_spacing = 0.5 mm
conductivity = 5.8e7 S/m
shape = flat

[placement]
x_eye = 92 mm
z_eye = 150 mm
tx_angle = 40 deg

[circuit]
r_source = 50 ohm
r_load = 1 kohm
tuned_frequency = 26 MHz
v_source = 1 V
esr_mode = skin_effect

[analysis]
sweep_start = 20 MHz
sweep_stop = 30 MHz
sweep_points = 1001 points
noise_floor = -85 dBV
snr_convention = voltage
segments_per_turn = 720 segments
coupling_method = neumann
coupling_tolerance = 1e-3 rel

[request.lumped]
kind = lumped
output = lumped.json

[request.tuned_spectrum]
kind = spectrum
tuning = tuned
output = tuned_spectrum.csv

[request.untuned_spectrum]
kind = spectrum
tuning = untuned
output = untuned_spectrum.csv

[request.capacity]
kind = capacity
output = capacity.csv

[request.tx_angle_sweep]
kind = misalignment
axis = tx_angle
start = 0 deg
stop = 90 deg
step = 10 deg
output = tx_angle_sweep.csv

[request.lateral_sweep]
kind = misalignment
axis = lateral
start = 60 mm
stop = 140 mm
step = 10 mm
output = lateral_sweep.csv

[request.axial_sweep]
kind = misalignment
axis = axial
start = 50 mm
stop = 300 mm
step = 25 mm
output = axial_sweep.csv

[request.source_impedance]
kind = impedance
param = r_source
values = 10 ohm, 25 ohm, 50 ohm, 100 ohm, 200 ohm, 500 ohm, 1 kohm
output = source_impedance.csv

[request.load_impedance]
kind = impedance
param = r_load
values = 1 ohm, 10 ohm, 50 ohm, 100 ohm, 200 ohm, 500 ohm, 1 kohm, 2 kohm, 5 kohm, 10 kohm
output = load_impedance.csv

[request.dual_mode]
kind = dual_mode
output = dual_mode.json

[request.tx_field_map]
kind = field_map
coil = tx
plane = xz
offset = 1 mm
u_min = -150 mm
u_max = 150 mm
v_min = -100 mm
v_max = 200 mm
u_points = 61 points
v_points = 61 points
current = 1 A
output = tx_field_map.csv
)";
}

std::string canonical_text(const ScenarioConfig& c) {
  std::ostringstream o;
  auto coil = [&](const char* name, const CoilSpec& s, const std::optional<double>& l) {
    o << name << ".turns=" << s.turns << '\n'
      << name << ".inner_radius=" << shortest(s.inner_radius) << '\n'
      << name << ".wire_diameter=" << shortest(s.wire_diameter) << '\n'
      << name << ".wire_spacing=" << shortest(s.wire_spacing) << '\n'
      << name << ".conductivity=" << shortest(s.conductivity) << '\n'
      << name << ".shape=" << (s.shape == CoilShape::flat_spiral ? "flat" : "helical") << '\n';
    if (s.shape == CoilShape::helical) o << name << ".sphere_radius=" << shortest(s.sphere_radius) << '\n';
    if (s.parasitic_capacitance) o << name << ".parasitic_capacitance=" << shortest(*s.parasitic_capacitance) << '\n';
    if (l) o << name << ".inductance=" << shortest(*l) << '\n';
  };
  const auto& sc = c.scenario;
  coil("tx", sc.tx, c.settings.l_tx_override);
  coil("rx", sc.rx, c.settings.l_rx_override);
  o << "placement.x_eye=" << shortest(sc.x_eye) << '\n'
    << "placement.z_eye=" << shortest(sc.z_eye) << '\n'
    << "placement.tx_angle=" << shortest(sc.tx_angle_deg) << '\n'
    << "circuit.r_source=" << shortest(sc.r_source) << '\n'
    << "circuit.r_load=" << shortest(sc.r_load) << '\n'
    << "circuit.tuned_frequency=" << shortest(sc.tuned_frequency) << '\n'
    << "circuit.v_source=" << shortest(sc.v_source) << '\n'
    << "circuit.esr_mode=" << (c.settings.esr_mode == EsrMode::fixed ? "fixed" : "skin_effect") << '\n'
    << "analysis.sweep_start=" << shortest(c.sweep_start) << '\n'
    << "analysis.sweep_stop=" << shortest(c.sweep_stop) << '\n'
    << "analysis.sweep_points=" << c.sweep_points << '\n'
    << "analysis.noise_floor=" << shortest(c.noise_floor_dbv) << '\n'
    << "analysis.snr_convention=" << to_string(c.snr_convention) << '\n'
    << "analysis.segments_per_turn=" << c.settings.segments_per_turn << '\n'
    << "analysis.coupling_method=" << to_string(c.settings.coupling.method) << '\n'
    << "analysis.coupling_tolerance=" << shortest(c.settings.coupling.tolerance) << '\n';
  for (const auto& r : c.requests) {
    const std::string p = "request." + r.name + ".";
    o << p << "kind=" << to_string(r.kind) << '\n' << p << "output=" << r.output << '\n';
    switch (r.kind) {
      case RequestKind::spectrum:
        o << p << "tuning=" << (r.tuned ? "tuned" : "untuned") << '\n';
        break;
      case RequestKind::misalignment:
      case RequestKind::impedance:
        if (r.kind == RequestKind::misalignment) o << p << "axis=" << to_string(r.axis) << '\n';
        else o << p << "param=" << r.impedance_param << '\n';
        o << p << "values=";
        for (std::size_t i = 0; i < r.values.size(); ++i) o << (i ? "," : "") << shortest(r.values[i]);
        o << '\n';
        break;
      case RequestKind::field_map:
        o << p << "coil=" << r.coil << '\n'
          << p << "plane=" << static_cast<int>(r.grid.plane) << '\n'
          << p << "grid=" << shortest(r.grid.offset) << ',' << shortest(r.grid.u_min) << ','
          << shortest(r.grid.u_max) << ',' << shortest(r.grid.v_min) << ',' << shortest(r.grid.v_max) << ','
          << r.grid.u_count << ',' << r.grid.v_count << '\n'
          << p << "current=" << shortest(r.current) << '\n';
        break;
      default:
        break;
    }
  }
  return o.str();
}

std::string config_digest(const ScenarioConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

const char* to_string(RequestKind kind) {
  switch (kind) {
    case RequestKind::spectrum: return "spectrum";
    case RequestKind::capacity: return "capacity";
    case RequestKind::misalignment: return "misalignment";
    case RequestKind::impedance: return "impedance";
    case RequestKind::dual_mode: return "dual_mode";
    case RequestKind::field_map: return "field_map";
    case RequestKind::lumped: return "lumped";
  }
  return "unknown";
}

}  // namespace mqslink

#include <gtest/gtest.h>

#include "mqslink/config.hpp"

using namespace mqslink;

namespace {

std::string minimal_config() {
  return R"([tx]
turns = 5 turns
inner_radius = 60 mm
wire_diameter = 0.137 mm
wire_spacing = 0.5 mm

[rx]
turns = 5 turns
inner_radius = 4 mm
wire_diameter = 0.137 mm
wire_spacing = 0.5 mm

[placement]
x_eye = 92 mm
z_eye = 150mm
tx_angle = 40 deg

[circuit]
r_source = 50 ohm
r_load = 1 kohm
tuned_frequency = 26 MHz
v_source = 1 V
)";
}

std::string error_of(const std::string& text, ParseOptions opts = {}) {
  try {
    parse_config_text(text, "test.ini", opts);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST(Config, EmptyWithDefaultsIsNominal) {
  const auto c = parse_config_text("", "empty.ini", {true});
  EXPECT_EQ(c.scenario.tx.turns, 5);
  EXPECT_EQ(c.scenario.rx.turns, 5);
  EXPECT_DOUBLE_EQ(c.scenario.tx.inner_radius, 0.060);
  EXPECT_DOUBLE_EQ(c.scenario.rx.inner_radius, 0.004);
  EXPECT_DOUBLE_EQ(c.scenario.rx.wire_diameter, 0.137e-3);
  EXPECT_DOUBLE_EQ(c.scenario.rx.wire_spacing, 0.5e-3);
  EXPECT_EQ(c.scenario.r_source, 50.0);
  EXPECT_EQ(c.scenario.r_load, 1000.0);
  EXPECT_EQ(c.scenario.tuned_frequency, 26e6);
  EXPECT_EQ(c.scenario.v_source, 1.0);
  EXPECT_EQ(c.noise_floor_dbv, -85.0);
  ASSERT_TRUE(c.settings.l_tx_override);
  EXPECT_DOUBLE_EQ(*c.settings.l_tx_override, 35e-6);
  EXPECT_FALSE(c.requests.empty());
  EXPECT_EQ(config_digest(c), config_digest(parse_config_text(default_config_text(), "d.ini")));
}

TEST(Config, EmptyWithoutDefaultsFails) {
  EXPECT_NE(error_of("").find("missing section [tx]"), std::string::npos);
}

TEST(Config, MinimalStrict) {
  const auto c = parse_config_text(minimal_config(), "m.ini");
  EXPECT_DOUBLE_EQ(c.scenario.z_eye, 0.150);
  EXPECT_DOUBLE_EQ(c.scenario.x_eye, 0.092);
  EXPECT_EQ(c.scenario.r_load, 1000.0);
  EXPECT_FALSE(c.settings.l_tx_override);
  EXPECT_TRUE(c.requests.empty());
}

TEST(Config, TurnsZeroNamesField) {
  const auto msg = error_of(replace(minimal_config(), "turns = 5 turns", "turns = 0 turns"));
  EXPECT_NE(msg.find("turns"), std::string::npos);
  EXPECT_NE(msg.find("test.ini:2:"), std::string::npos) << msg;
}

TEST(Config, UntaggedNumberRejected) {
  const auto msg = error_of(replace(minimal_config(), "z_eye = 150mm", "z_eye = 0.15"));
  EXPECT_NE(msg.find("unit tag"), std::string::npos) << msg;
  EXPECT_NE(msg.find(":15:"), std::string::npos) << msg;
  EXPECT_NE(error_of(replace(minimal_config(), "turns = 5 turns", "turns = 5")), "");
}

TEST(Config, UnitMismatchRejected) {
  const auto msg = error_of(replace(minimal_config(), "r_source = 50 ohm", "r_source = 50 mm"));
  EXPECT_NE(msg.find("not a resistance"), std::string::npos) << msg;
  EXPECT_NE(error_of(replace(minimal_config(), "r_source = 50 ohm", "r_source = 50 furlongs")), "");
}

TEST(Config, NonPositiveRejected) {
  EXPECT_NE(error_of(replace(minimal_config(), "r_load = 1 kohm", "r_load = -1 kohm")).find("r_load"),
            std::string::npos);
  EXPECT_NE(error_of(replace(minimal_config(), "tuned_frequency = 26 MHz", "tuned_frequency = 0 MHz")), "");
}

TEST(Config, UnknownKeysAndSections) {
  auto msg = error_of(minimal_config() + "colour = 3 turns\n");
  EXPECT_NE(msg.find("unknown key 'colour'"), std::string::npos) << msg;
  msg = error_of(minimal_config() + "[extras]\n");
  EXPECT_NE(msg.find("unknown section"), std::string::npos) << msg;
}

TEST(Config, MissingKeyAndSection) {
  auto msg = error_of(replace(minimal_config(), "v_source = 1 V\n", ""));
  EXPECT_NE(msg.find("missing key 'v_source'"), std::string::npos) << msg;
  msg = error_of(replace(minimal_config(), "[placement]", "[placement_typo]"));
  EXPECT_NE(msg.find("unknown section"), std::string::npos) << msg;
}

TEST(Config, SyntaxErrors) {
  EXPECT_NE(error_of("turns = 5 turns\n").find("outside of any section"), std::string::npos);
  EXPECT_NE(error_of("[tx\n").find("malformed"), std::string::npos);
  EXPECT_NE(error_of(minimal_config() + "[tx]\n").find("duplicate section"), std::string::npos);
  EXPECT_NE(error_of(replace(minimal_config(), "x_eye = 92 mm", "x_eye = 92 mm\nx_eye = 93 mm")).find("duplicate key"),
            std::string::npos);
}

TEST(Config, UnitConversions) {
  auto text = minimal_config() +
              "sphere_radius = 1.2 cm\n";  // lands in [circuit]: unknown key
  EXPECT_NE(error_of(text), "");
  text = replace(minimal_config(), "inner_radius = 4 mm", "inner_radius = 4000 um");
  text = replace(text, "r_load = 1 kohm", "r_load = 1000 \xCE\xA9");
  text = replace(text, "tuned_frequency = 26 MHz", "tuned_frequency = 0.026 GHz");
  text = replace(text, "tx_angle = 40 deg", "tx_angle = 0.5 rad");
  text += "\n[analysis]\nnoise_floor = -80 dBV\nsweep_points = 11 points\n";
  const auto c = parse_config_text(text, "u.ini");
  EXPECT_DOUBLE_EQ(c.scenario.rx.inner_radius, 0.004);
  EXPECT_EQ(c.scenario.r_load, 1000.0);
  EXPECT_DOUBLE_EQ(c.scenario.tuned_frequency, 26e6);
  EXPECT_NEAR(c.scenario.tx_angle_deg, 28.64788975654116, 1e-12);
  EXPECT_EQ(c.noise_floor_dbv, -80.0);
  EXPECT_EQ(c.sweep_points, 11u);
}

TEST(Config, InductanceOverrideAndParasitics) {
  auto text = replace(minimal_config(), "[rx]", "inductance = 35 uH\nparasitic_capacitance = 0.2 pF\n\n[rx]");
  const auto c = parse_config_text(text, "o.ini");
  ASSERT_TRUE(c.settings.l_tx_override);
  EXPECT_DOUBLE_EQ(*c.settings.l_tx_override, 35e-6);
  ASSERT_TRUE(c.scenario.tx.parasitic_capacitance);
  EXPECT_DOUBLE_EQ(*c.scenario.tx.parasitic_capacitance, 0.2e-12);
}

TEST(Config, Requests) {
  const auto text = minimal_config() + R"(
[request.angles]
kind = misalignment
axis = tx_angle
start = 0 deg
stop = 90 deg
step = 10 deg

[request.loads]
kind = impedance
param = r_load
start = 10 ohm
stop = 10 kohm
points = 4 points

[request.spec]
kind = spectrum
tuning = untuned
output = s.csv

[request.map]
kind = field_map
coil = rx
plane = xy
offset = 150 mm
u_points = 3 points
v_points = 2 points
)";
  const auto c = parse_config_text(text, "r.ini");
  ASSERT_EQ(c.requests.size(), 4u);
  const auto& angles = c.requests[0];
  EXPECT_EQ(angles.kind, RequestKind::misalignment);
  ASSERT_EQ(angles.values.size(), 10u);
  EXPECT_EQ(angles.values.front(), 0.0);
  EXPECT_EQ(angles.values.back(), 90.0);
  EXPECT_EQ(angles.output, "angles.csv");
  const auto& loads = c.requests[1];
  ASSERT_EQ(loads.values.size(), 4u);
  EXPECT_DOUBLE_EQ(loads.values[1], 100.0);
  EXPECT_EQ(loads.impedance_param, "r_load");
  EXPECT_FALSE(c.requests[2].tuned);
  EXPECT_EQ(c.requests[2].output, "s.csv");
  EXPECT_EQ(c.requests[3].grid.plane, GridPlane::xy);
  EXPECT_DOUBLE_EQ(c.requests[3].grid.offset, 0.150);
  EXPECT_EQ(c.requests[3].grid.u_count, 3);
}

TEST(Config, RequestErrors) {
  EXPECT_NE(error_of(minimal_config() + "[request.a]\noutput = a.csv\n").find("missing key 'kind'"), std::string::npos);
  EXPECT_NE(error_of(minimal_config() + "[request.a]\nkind = sideways\n").find("expected one of"), std::string::npos);
  // A key that belongs to a different kind is unknown here.
  EXPECT_NE(error_of(minimal_config() + "[request.a]\nkind = spectrum\naxis = lateral\n").find("unknown key"),
            std::string::npos);
  EXPECT_NE(error_of(minimal_config() + "[request.a]\nkind = misalignment\naxis = lateral\nstart = 1 deg\n")
                .find("not a length"),
            std::string::npos);
  EXPECT_NE(error_of(minimal_config() + "[request.a]\nkind = misalignment\n").find("needs 'values'"),
            std::string::npos);
  EXPECT_NE(error_of(minimal_config() + "[request.a]\nkind = lumped\noutput = ../x.json\n").find("plain file name"),
            std::string::npos);
  EXPECT_NE(error_of(minimal_config() + "[request.a]\nkind = lumped\noutput = x\n[request.b]\nkind = capacity\noutput = x\n")
                .find("two requests"),
            std::string::npos);
}

TEST(Config, AllowDefaultsReplacesDefaultRequests) {
  const auto c = parse_config_text("[request.only]\nkind = capacity\n", "r.ini", {true});
  ASSERT_EQ(c.requests.size(), 1u);
  EXPECT_EQ(c.requests[0].name, "only");
}

TEST(Config, DigestIsStableAndSensitive) {
  const auto a = parse_config_text(minimal_config(), "a.ini");
  const auto b = parse_config_text("# comment\n" + minimal_config(), "b.ini");
  EXPECT_EQ(config_digest(a), config_digest(b));
  EXPECT_EQ(config_digest(a).rfind("fnv1a64:", 0), 0u);
  EXPECT_EQ(config_digest(a).size(), 8u + 16u);
  const auto c = parse_config_text(replace(minimal_config(), "x_eye = 92 mm", "x_eye = 93 mm"), "c.ini");
  EXPECT_NE(config_digest(a), config_digest(c));
}

TEST(Config, DefaultTextRoundTrips) {
  const auto c = parse_config_text(default_config_text(), "defaults.ini");
  EXPECT_EQ(c.requests.size(), 11u);
  EXPECT_EQ(canonical_text(c), canonical_text(parse_config_text(default_config_text(), "again.ini")));
}

#include "mqslink/lumped.hpp"

#include <cmath>

#include "mqslink/constants.hpp"
#include "mqslink/errors.hpp"

namespace mqslink {

namespace {

void require_frequency(double f) {
  if (!(f > 0) || !std::isfinite(f)) throw InvalidArgument("frequency must be > 0");
}

}  // namespace

WheelerValidity wheeler_validity(const CoilSpec& spec) {
  spec.validate();
  const double depth = spec.turns * spec.pitch();
  const double winding_radius = (spec.outer_diameter() - depth) / 2.0;
  WheelerValidity v{};
  v.enough_turns = spec.turns >= kWheelerMinTurns;
  v.wire_not_dominant = spec.wire_diameter <= kWheelerMaxWireToSpacing * spec.wire_spacing;
  v.fill_ratio = depth / winding_radius;
  v.fill_ratio_ok = v.fill_ratio >= kWheelerMinFillRatio;
  return v;
}

InductanceEstimate wheeler_inductance(const CoilSpec& spec) {
  spec.validate();
  if (spec.shape != CoilShape::flat_spiral) {
    throw InvalidArgument("Wheeler expression applies to flat spirals only");
  }
  const double n = spec.turns;
  const double d_out = spec.outer_diameter();
  const double depth = n * spec.pitch();
  const double mean = d_out - depth;
  const double l = n * n * mean * mean / (16.0 * d_out + 28.0 * depth) * 39.37e-6;
  const auto validity = wheeler_validity(spec).ok() ? Validity::trusted : Validity::low_confidence;
  return {l, validity, InductanceSource::wheeler};
}

double fill_factor(const CoilSpec& spec) {
  const double d_out = spec.outer_diameter();
  const double d_in = spec.inner_diameter();
  return (d_out - d_in) / (d_out + d_in);
}

double current_sheet_inductance(const CoilSpec& spec) {
  spec.validate();
  const double gamma = fill_factor(spec);
  if (!(gamma > 0)) throw InvalidArgument("current-sheet inductance needs D_o > D_i");
  const double n = spec.turns;
  const double mean_diameter = (spec.outer_diameter() + spec.inner_diameter()) / 2.0;
  return kMu0 * n * n * mean_diameter / 2.0 * (std::log(2.46 / gamma) + 0.2 * gamma * gamma);
}

InductanceEstimate estimate_inductance(const CoilSpec& spec,
                                       std::optional<double> override_inductance) {
  spec.validate();
  if (override_inductance) {
    if (!(*override_inductance > 0) || !std::isfinite(*override_inductance)) {
      throw InvalidArgument("inductance override must be > 0");
    }
    return {*override_inductance, Validity::trusted, InductanceSource::user_supplied};
  }
  const auto validity = wheeler_validity(spec).ok() ? Validity::trusted : Validity::low_confidence;
  return {current_sheet_inductance(spec), validity, InductanceSource::current_sheet};
}

double skin_depth(double frequency, double conductivity) {
  require_frequency(frequency);
  if (!(conductivity > 0)) throw InvalidArgument("conductivity must be > 0");
  return 1.0 / std::sqrt(kPi * frequency * conductivity * kMu0);
}

double surface_resistance(double frequency, double conductivity) {
  return 1.0 / (conductivity * skin_depth(frequency, conductivity));
}

double ac_resistance(const CoilSpec& spec, double frequency) {
  spec.validate();
  const double n = spec.turns;
  const double length_term = n * (spec.outer_diameter() - n * spec.pitch());
  return surface_resistance(frequency, spec.conductivity) * length_term / spec.wire_diameter;
}

double quality_factor(double inductance, double resistance, double frequency) {
  if (!(inductance > 0) || !(resistance > 0) || !(frequency > 0)) {
    throw InvalidArgument("quality_factor needs positive L, R and f");
  }
  return 2.0 * kPi * frequency * inductance / resistance;
}

LumpedCoil lumped_coil(const CoilSpec& spec, double frequency,
                       std::optional<double> override_inductance) {
  const auto est = estimate_inductance(spec, override_inductance);
  const double r = ac_resistance(spec, frequency);
  return {est.inductance,
          r,
          quality_factor(est.inductance, r, frequency),
          skin_depth(frequency, spec.conductivity),
          frequency,
          est.validity,
          est.source};
}

const char* to_string(Validity v) {
  return v == Validity::trusted ? "trusted" : "low-confidence";
}

const char* to_string(InductanceSource s) {
  switch (s) {
    case InductanceSource::wheeler: return "wheeler";
    case InductanceSource::current_sheet: return "current-sheet";
    case InductanceSource::user_supplied: return "user-supplied";
  }
  return "unknown";
}

}  // namespace mqslink

#pragma once

// Lumped electrical parameters of a single coil.

#include <optional>

#include "mqslink/geometry.hpp"

namespace mqslink {

enum class Validity { trusted, low_confidence };
enum class InductanceSource { wheeler, current_sheet, user_supplied };

struct InductanceEstimate {
  double inductance;  // H
  Validity validity;
  InductanceSource source;
};

/// Applicability of the modified Wheeler expression. It is unreliable for few
/// turns, for wire much thicker than its spacing, and when the radial depth
/// N(d+s) is below 0.2 of the winding radius (D_o - N(d+s))/2.
struct WheelerValidity {
  bool enough_turns;
  bool wire_not_dominant;
  bool fill_ratio_ok;
  double fill_ratio;

  bool ok() const { return enough_turns && wire_not_dominant && fill_ratio_ok; }
};

inline constexpr int kWheelerMinTurns = 3;
inline constexpr double kWheelerMaxWireToSpacing = 4.0;
inline constexpr double kWheelerMinFillRatio = 0.2;

WheelerValidity wheeler_validity(const CoilSpec& spec);

/// Modified Wheeler expression for a flat spiral,
///
///   L = N^2 (D_o - N(d+s))^2 / (16 D_o + 28 N(d+s)) * 39.37e-6   [H]
///
/// with lengths in meters: 39.37 converts meters to inches and 1e-6 turns the
/// microhenry result into henries. The mean-diameter term is squared; without
/// the square the expression is dimensionless and off by five orders of
/// magnitude for the 0.4 uH lens coil.
InductanceEstimate wheeler_inductance(const CoilSpec& spec);

/// Current-sheet expression from the arithmetic/geometric mean distances:
///   gamma = (D_o - D_i) / (D_o + D_i)
///   L = mu0 N^2 (D_o + D_i)/2 / 2 * (ln(2.46/gamma) + 0.2 gamma^2)
double current_sheet_inductance(const CoilSpec& spec);

/// Fill factor gamma = (D_o - D_i) / (D_o + D_i).
double fill_factor(const CoilSpec& spec);

/// User override if given, else the current-sheet value flagged with the
/// Wheeler applicability conditions.
InductanceEstimate estimate_inductance(const CoilSpec& spec,
                                       std::optional<double> override_inductance = std::nullopt);

/// delta = 1 / sqrt(pi f sigma mu0)
double skin_depth(double frequency, double conductivity);

/// sqrt(f pi mu0 / sigma) == 1 / (sigma delta). Shared by skin_depth callers
/// and ac_resistance.
double surface_resistance(double frequency, double conductivity);

/// R = sqrt(f pi mu0 / sigma) * N (D_o - N(d+s)) / d. Skin effect only; the
/// proximity effect is not modelled, so this underestimates real coils.
double ac_resistance(const CoilSpec& spec, double frequency);

/// Q = 2 pi f L / R
double quality_factor(double inductance, double resistance, double frequency);

struct LumpedCoil {
  double inductance;
  double series_resistance;
  double quality_factor;
  double skin_depth;
  double frequency;
  Validity validity;
  InductanceSource source;
};

LumpedCoil lumped_coil(const CoilSpec& spec, double frequency,
                       std::optional<double> override_inductance = std::nullopt);

const char* to_string(Validity v);
const char* to_string(InductanceSource s);

}  // namespace mqslink

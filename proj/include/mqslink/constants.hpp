#pragma once

#include <numbers>

namespace mqslink {

inline constexpr double kPi = std::numbers::pi;

/// Vacuum permeability (H/m), classical defined value.
inline constexpr double kMu0 = 4.0e-7 * kPi;

/// mu0 / (4 pi), the Biot-Savart and Neumann prefactor.
inline constexpr double kMu0Over4Pi = 1.0e-7;

inline constexpr double kCopperConductivity = 5.8e7;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace mqslink

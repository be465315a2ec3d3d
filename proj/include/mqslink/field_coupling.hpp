#pragma once

// Magnetic fields, flux and mutual inductance of posed filament coils.

#include <optional>
#include <vector>

#include "mqslink/geometry.hpp"

namespace mqslink {

/// Flux density from the closed current path of `coil` carrying `current`
/// (A), summed with the exact finite straight-segment Biot-Savart kernel.
/// Throws SingularEvaluation when the point lies within half a wire diameter
/// of any segment.
Vec3 b_field(const FilamentCoil& coil, double current, const Vec3& point);

struct FieldSample {
  Vec3 position;
  std::optional<Vec3> b;  // empty when the sample sits on the wire
};

enum class GridPlane { xy, xz, yz };

/// Axis-aligned planar grid. u/v are the plane's first/second world axes
/// (xy: u=x, v=y; xz: u=x, v=z; yz: u=y, v=z); `offset` is the remaining
/// coordinate.
struct PlaneGrid {
  GridPlane plane = GridPlane::xz;
  double offset = 0.0;
  double u_min = -0.1, u_max = 0.1;
  double v_min = -0.1, v_max = 0.1;
  int u_count = 41;
  int v_count = 41;

  void validate() const;
  Vec3 point(int iu, int iv) const;
};

/// Row-major samples (v outer, u inner). Singular points are masked, not fatal.
std::vector<FieldSample> field_map(const FilamentCoil& coil, double current, const PlaneGrid& grid);

struct FluxResult {
  double flux;                   // Wb, summed over all receiver turns
  double convergence_estimate;   // relative change of the last refinement
  int refinement_level;
};

inline constexpr double kDefaultFluxTolerance = 1e-5;

/// Total flux of the transmitter's field linked by the receiver: for every
/// receiver turn, B . dS over the flat disk of that turn (polar Gauss-Legendre
/// x periodic trapezoid quadrature), refined until successive estimates
/// differ by less than `tolerance`. Throws ConvergenceError at the cap.
FluxResult flux_through(const FilamentCoil& tx, const FilamentCoil& rx, double current,
                        double tolerance = kDefaultFluxTolerance);

enum class CouplingMethod { neumann, flux };

struct CouplingOptions {
  CouplingMethod method = CouplingMethod::neumann;
  double tolerance = 1e-3;
  int max_refinements = 3;
};

struct CouplingResult {
  double mutual_inductance;  // H, signed by winding orientation
  double coupling = 0.0;     // k, filled by with_inductances()
  CouplingMethod method;
  double convergence_estimate;
  int refinement_level;

  CouplingResult& with_inductances(double l_tx, double l_rx);
};

/// Neumann double line integral over the closed current paths (midpoint rule,
/// every segment split in two per refinement until the relative change drops
/// below the tolerance), or M = flux / I through flux_through().
/// Throws SeparationError when the coils come within a wire diameter.
CouplingResult mutual_inductance(const FilamentCoil& tx, const FilamentCoil& rx,
                                 const CouplingOptions& options = {});

/// k = |M| / sqrt(L_tx L_rx); throws InvalidArgument when |k| >= 1.
double coupling_coefficient(double mutual, double l_tx, double l_rx);

/// Complete elliptic integrals K(k) and E(k) of modulus k via the
/// arithmetic-geometric mean.
struct EllipticKE {
  double k;
  double e;
};
EllipticKE complete_elliptic_integrals(double modulus);

/// Maxwell's mutual inductance of two coaxial circular filaments of radii
/// r1, r2 whose planes are z apart.
double coaxial_mutual_oracle(double r1, double r2, double z);

const char* to_string(CouplingMethod m);

}  // namespace mqslink

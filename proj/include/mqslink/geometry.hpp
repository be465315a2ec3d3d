#pragma once

// Coil geometry: specs, filament discretization, rigid poses and the
// necklace/lens scenario placement.
//
// World frame: z vertical (up), x forward (from the neck toward the eye),
// y lateral. A coil's local frame has its winding in the local z = 0 plane
// and its axis along local +z; the winding runs counter-clockwise about +z.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mqslink {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class CoilShape { flat_spiral, helical };

struct CoilSpec {
  int turns = 1;
  double inner_radius = 0.0;   // m
  double wire_diameter = 0.0;  // m
  double wire_spacing = 0.0;   // m
  CoilShape shape = CoilShape::flat_spiral;
  double sphere_radius = 12e-3;  // m, helical only
  double conductivity = 5.8e7;   // S/m
  std::optional<double> parasitic_capacitance;  // F

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  double pitch() const { return wire_diameter + wire_spacing; }
  double inner_diameter() const { return 2.0 * inner_radius; }
  double outer_diameter() const { return 2.0 * inner_radius + 2.0 * turns * pitch(); }
};

/// Rigid placement: rotate by tilt_deg about tilt_axis, then translate to center.
struct Pose {
  Vec3 center = Vec3::Zero();
  double tilt_deg = 0.0;
  Vec3 tilt_axis = Vec3::UnitY();

  Mat3 rotation() const;
};

struct Segment {
  Vec3 start;
  Vec3 end;

  double length() const { return (end - start).norm(); }
};

/// Disk spanned by one turn, used as the flux surface.
struct TurnDisk {
  Vec3 center;
  Vec3 normal;
  double radius;
};

/// Polyline model of a posed coil.
///
/// The winding is a connected chain of straight segments. Multi-turn spirals
/// start and end at different radii; their circuit is closed by a straight
/// return lead from the last vertex back to the first, which takes part in
/// field integrals but is not counted in wire_length().
class FilamentCoil {
 public:
  FilamentCoil(std::vector<Vec3> vertices, std::vector<double> turn_radii,
               std::vector<double> turn_heights, double wire_diameter);

  std::span<const Vec3> vertices() const { return vertices_; }
  std::size_t segment_count() const { return vertices_.size() - 1; }
  Segment segment(std::size_t i) const { return {vertices_[i], vertices_[i + 1]}; }

  /// Closing segment from the last vertex back to the first, if the winding
  /// does not already end where it started.
  std::optional<Segment> return_lead() const;

  /// Vertices of the closed current path (first vertex repeated at the end).
  std::vector<Vec3> closed_path() const;

  std::span<const double> turn_radii() const { return turn_radii_; }
  double wire_diameter() const { return wire_diameter_; }
  double wire_length() const { return wire_length_; }

  const Vec3& origin() const { return origin_; }
  const Mat3& orientation() const { return orientation_; }
  Vec3 axis() const { return orientation_.col(2); }

  std::vector<TurnDisk> turn_disks() const;

  friend FilamentCoil apply_pose(const FilamentCoil& coil, const Pose& pose);

 private:
  std::vector<Vec3> vertices_;
  std::vector<double> turn_radii_;
  std::vector<double> turn_heights_;  // local axial offset of each turn disk
  double wire_diameter_;
  double wire_length_;
  Vec3 origin_ = Vec3::Zero();
  Mat3 orientation_ = Mat3::Identity();
};

/// Necklace/lens placement plus the circuit operating point.
struct Scenario {
  CoilSpec tx;
  CoilSpec rx;
  double x_eye = 0.092;      // m, forward offset of the lens from the necklace center
  double z_eye = 0.150;      // m, vertical offset
  double tx_angle_deg = 40;  // necklace plane tilt from horizontal
  double r_source = 50.0;    // ohm
  double r_load = 1000.0;    // ohm
  double tuned_frequency = 26e6;  // Hz
  double v_source = 1.0;     // V, peak

  void validate() const;
};

/// radius_i = inner_radius + i * (d + s), i = 0..N-1.
std::vector<double> turn_radii(const CoilSpec& spec);

inline constexpr int kDefaultSegmentsPerTurn = 720;
inline constexpr int kMinSegmentsPerTurn = 16;

/// Discretizes a coil in its local frame.
///
/// A single turn is a closed regular polygon inscribed in the circle of
/// inner_radius. A multi-turn flat spiral is Archimedean, with its radius
/// passing through turn radius r_i at the middle of turn i (so each turn
/// spans r_i - p/2 .. r_i + p/2 for pitch p). The helical variant lifts the
/// same winding onto a sphere of sphere_radius, sagging away from +z.
FilamentCoil build_filament_coil(const CoilSpec& spec,
                                 int segments_per_turn = kDefaultSegmentsPerTurn);

/// Closed regular polygon of `segments` sides inscribed in a circle of the
/// given radius, in the local z = 0 plane.
FilamentCoil make_loop(double radius, int segments, double wire_diameter = 0.0);

FilamentCoil apply_pose(const FilamentCoil& coil, const Pose& pose);

struct ScenarioPoses {
  Pose tx;
  Pose rx;
};

/// Tx at the origin tilted by tx_angle about +y (its axis leans toward +x);
/// Rx at (x_eye, 0, z_eye) with its axis along +x.
ScenarioPoses scenario_poses(const Scenario& sc);

CoilSpec nominal_tx_spec();
CoilSpec nominal_rx_spec();
Scenario nominal_scenario();

}  // namespace mqslink

#include "mqslink/geometry.hpp"

#include <cmath>
#include <string>

#include "mqslink/constants.hpp"
#include "mqslink/errors.hpp"

namespace mqslink {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

double sphere_sag(double radius, double sphere_radius) {
  return std::sqrt(sphere_radius * sphere_radius - radius * radius) - sphere_radius;
}

}  // namespace

void CoilSpec::validate() const {
  require(turns >= 1, "turns must be >= 1");
  require(std::isfinite(inner_radius) && inner_radius > 0, "inner_radius must be > 0");
  require(std::isfinite(wire_diameter) && wire_diameter > 0, "wire_diameter must be > 0");
  require(std::isfinite(wire_spacing) && wire_spacing >= 0, "wire_spacing must be >= 0");
  require(std::isfinite(conductivity) && conductivity > 0, "conductivity must be > 0");
  if (parasitic_capacitance) {
    require(*parasitic_capacitance > 0, "parasitic_capacitance must be > 0");
  }
  if (shape == CoilShape::helical) {
    const double outermost = inner_radius + (turns - 0.5) * pitch();
    require(std::isfinite(sphere_radius) && sphere_radius > outermost,
            "sphere_radius must exceed the outermost winding radius");
  }
}

Mat3 Pose::rotation() const {
  if (tilt_deg == 0.0) return Mat3::Identity();
  const double n = tilt_axis.norm();
  require(n > 0, "pose tilt_axis must be non-zero");
  return Eigen::AngleAxisd(deg_to_rad(tilt_deg), tilt_axis / n).toRotationMatrix();
}

void Scenario::validate() const {
  tx.validate();
  rx.validate();
  require(x_eye >= 0, "x_eye must be >= 0");
  require(z_eye >= 0, "z_eye must be >= 0");
  require(std::isfinite(tx_angle_deg), "tx_angle must be finite");
  require(r_source > 0, "r_source must be > 0");
  require(r_load > 0, "r_load must be > 0");
  require(tuned_frequency > 0, "tuned_frequency must be > 0");
  require(v_source > 0, "v_source must be > 0");
}

FilamentCoil::FilamentCoil(std::vector<Vec3> vertices, std::vector<double> turn_radii,
                           std::vector<double> turn_heights, double wire_diameter)
    : vertices_(std::move(vertices)),
      turn_radii_(std::move(turn_radii)),
      turn_heights_(std::move(turn_heights)),
      wire_diameter_(wire_diameter),
      wire_length_(0.0) {
  require(vertices_.size() >= 2, "filament coil needs at least one segment");
  require(turn_radii_.size() == turn_heights_.size(), "turn radii/heights size mismatch");
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    wire_length_ += (vertices_[i + 1] - vertices_[i]).norm();
  }
}

std::optional<Segment> FilamentCoil::return_lead() const {
  if (vertices_.back() == vertices_.front()) return std::nullopt;
  return Segment{vertices_.back(), vertices_.front()};
}

std::vector<Vec3> FilamentCoil::closed_path() const {
  std::vector<Vec3> path(vertices_.begin(), vertices_.end());
  if (return_lead()) path.push_back(vertices_.front());
  return path;
}

std::vector<TurnDisk> FilamentCoil::turn_disks() const {
  std::vector<TurnDisk> disks;
  disks.reserve(turn_radii_.size());
  const Vec3 n = axis();
  for (std::size_t i = 0; i < turn_radii_.size(); ++i) {
    disks.push_back({origin_ + n * turn_heights_[i], n, turn_radii_[i]});
  }
  return disks;
}

std::vector<double> turn_radii(const CoilSpec& spec) {
  spec.validate();
  std::vector<double> radii(static_cast<std::size_t>(spec.turns));
  for (int i = 0; i < spec.turns; ++i) radii[i] = spec.inner_radius + i * spec.pitch();
  return radii;
}

FilamentCoil make_loop(double radius, int segments, double wire_diameter) {
  require(radius > 0, "loop radius must be > 0");
  require(segments >= 3, "loop needs at least 3 segments");
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(segments) + 1);
  for (int k = 0; k < segments; ++k) {
    const double t = 2.0 * kPi * k / segments;
    pts.emplace_back(radius * std::cos(t), radius * std::sin(t), 0.0);
  }
  pts.push_back(pts.front());
  return FilamentCoil(std::move(pts), {radius}, {0.0}, wire_diameter);
}

FilamentCoil build_filament_coil(const CoilSpec& spec, int segments_per_turn) {
  spec.validate();
  if (segments_per_turn < kMinSegmentsPerTurn) {
    throw InvalidArgument("segments_per_turn must be >= " + std::to_string(kMinSegmentsPerTurn));
  }
  auto radii = turn_radii(spec);
  const bool helical = spec.shape == CoilShape::helical;

  if (spec.turns == 1) {
    FilamentCoil loop = make_loop(spec.inner_radius, segments_per_turn, spec.wire_diameter);
    if (!helical) return loop;
    const double z = sphere_sag(spec.inner_radius, spec.sphere_radius);
    std::vector<Vec3> pts(loop.vertices().begin(), loop.vertices().end());
    for (auto& p : pts) p.z() = z;
    return FilamentCoil(std::move(pts), std::move(radii), {z}, spec.wire_diameter);
  }

  const double p = spec.pitch();
  const std::size_t total = static_cast<std::size_t>(spec.turns) * segments_per_turn;
  std::vector<Vec3> pts;
  pts.reserve(total + 1);
  std::vector<double> heights(radii.size(), 0.0);
  for (std::size_t k = 0; k <= total; ++k) {
    const double turns_done = static_cast<double>(k) / segments_per_turn;
    const double t = 2.0 * kPi * turns_done;
    const double rho = spec.inner_radius - 0.5 * p + p * turns_done;
    const double z = helical ? sphere_sag(rho, spec.sphere_radius) : 0.0;
    pts.emplace_back(rho * std::cos(t), rho * std::sin(t), z);
    if (k < total) heights[k / segments_per_turn] += z / segments_per_turn;
  }
  return FilamentCoil(std::move(pts), std::move(radii), std::move(heights), spec.wire_diameter);
}

FilamentCoil apply_pose(const FilamentCoil& coil, const Pose& pose) {
  const Mat3 r = pose.rotation();
  FilamentCoil out = coil;
  for (auto& v : out.vertices_) v = r * v + pose.center;
  out.origin_ = r * coil.origin_ + pose.center;
  out.orientation_ = r * coil.orientation_;
  return out;
}

ScenarioPoses scenario_poses(const Scenario& sc) {
  ScenarioPoses poses;
  poses.tx.center = Vec3::Zero();
  poses.tx.tilt_deg = sc.tx_angle_deg;
  poses.tx.tilt_axis = Vec3::UnitY();
  poses.rx.center = Vec3(sc.x_eye, 0.0, sc.z_eye);
  poses.rx.tilt_deg = 90.0;
  poses.rx.tilt_axis = Vec3::UnitY();
  return poses;
}

CoilSpec nominal_tx_spec() {
  CoilSpec s;
  s.turns = 5;
  s.inner_radius = 60e-3;
  s.wire_diameter = 0.137e-3;
  s.wire_spacing = 0.5e-3;
  s.conductivity = kCopperConductivity;
  return s;
}

CoilSpec nominal_rx_spec() {
  CoilSpec s = nominal_tx_spec();
  s.inner_radius = 4e-3;
  return s;
}

Scenario nominal_scenario() {
  Scenario sc;
  sc.tx = nominal_tx_spec();
  sc.rx = nominal_rx_spec();
  return sc;
}

}  // namespace mqslink

#include "mqslink/field_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mqslink/constants.hpp"
#include "mqslink/errors.hpp"
#include "mqslink/parallel.hpp"

namespace mqslink {

namespace {

// Structure-of-arrays view of a closed current path.
struct SegmentArrays {
  std::vector<double> ax, ay, az;  // segment start
  std::vector<double> dx, dy, dz;  // segment vector
  std::vector<double> mx, my, mz;  // segment midpoint

  std::size_t size() const { return ax.size(); }
};

// Closed path with every segment split into `pieces` equal parts.
SegmentArrays segment_arrays(const FilamentCoil& coil, std::size_t pieces = 1) {
  const auto path = coil.closed_path();
  SegmentArrays s;
  const std::size_t n = (path.size() - 1) * pieces;
  for (auto* v : {&s.ax, &s.ay, &s.az, &s.dx, &s.dy, &s.dz, &s.mx, &s.my, &s.mz}) v->reserve(n);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec3 step = (path[i + 1] - path[i]) / static_cast<double>(pieces);
    for (std::size_t k = 0; k < pieces; ++k) {
      const Vec3 a = path[i] + step * static_cast<double>(k);
      const Vec3 m = a + 0.5 * step;
      s.ax.push_back(a.x());
      s.ay.push_back(a.y());
      s.az.push_back(a.z());
      s.dx.push_back(step.x());
      s.dy.push_back(step.y());
      s.dz.push_back(step.z());
      s.mx.push_back(m.x());
      s.my.push_back(m.y());
      s.mz.push_back(m.z());
    }
  }
  return s;
}

// Biot-Savart sum over all segments for unit current, without the mu0/4pi
// prefactor. Returns nullopt when the point is within `exclusion` of a segment.
std::optional<Vec3> biot_savart_unit(const SegmentArrays& s, const Vec3& p, double exclusion) {
  const double excl2 = exclusion * exclusion;
  double bx = 0, by = 0, bz = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r1x = p.x() - s.ax[i], r1y = p.y() - s.ay[i], r1z = p.z() - s.az[i];
    const double lx = s.dx[i], ly = s.dy[i], lz = s.dz[i];
    const double l2 = lx * lx + ly * ly + lz * lz;
    if (excl2 > 0) {
      const double t = std::clamp((r1x * lx + r1y * ly + r1z * lz) / l2, 0.0, 1.0);
      const double cx = r1x - t * lx, cy = r1y - t * ly, cz = r1z - t * lz;
      if (cx * cx + cy * cy + cz * cz < excl2) return std::nullopt;
    }
    const double r2x = r1x - lx, r2y = r1y - ly, r2z = r1z - lz;
    const double cx = r1y * r2z - r1z * r2y;
    const double cy = r1z * r2x - r1x * r2z;
    const double cz = r1x * r2y - r1y * r2x;
    // |r1 x r2|^2 = dist^2 * l^2: collinear within rounding of the segment line.
    if (cx * cx + cy * cy + cz * cz <= 1e-24 * l2 * l2) {
      const double along = r1x * lx + r1y * ly + r1z * lz;
      if (along >= -1e-12 * l2 && along <= l2 * (1.0 + 1e-12)) return std::nullopt;
      continue;  // on the extension of the segment: no contribution
    }
    const double n1 = std::sqrt(r1x * r1x + r1y * r1y + r1z * r1z);
    const double n2 = std::sqrt(r2x * r2x + r2y * r2y + r2z * r2z);
    const double f = (n1 + n2) / (n1 * n2 * (n1 * n2 + r1x * r2x + r1y * r2y + r1z * r2z));
    bx += f * cx;
    by += f * cy;
    bz += f * cz;
  }
  return Vec3(bx, by, bz);
}

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

void orthonormal_basis(const Vec3& n, Vec3& u, Vec3& v) {
  const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  u = n.cross(helper).normalized();
  v = n.cross(u);
}

struct NeumannSum {
  double sum;
  double gross;
  double min_distance;
};

NeumannSum neumann_sum(const SegmentArrays& a, const SegmentArrays& b) {
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (a.size() + kBlock - 1) / kBlock;
  std::vector<NeumannSum> partial(blocks);
  parallel_for(blocks, [&](std::size_t blk) {
    CompensatedSum sum, gross;
    double min_d2 = std::numeric_limits<double>::infinity();
    const std::size_t end = std::min(a.size(), (blk + 1) * kBlock);
    for (std::size_t i = blk * kBlock; i < end; ++i) {
      const double mx = a.mx[i], my = a.my[i], mz = a.mz[i];
      const double dx = a.dx[i], dy = a.dy[i], dz = a.dz[i];
      double row = 0.0, row_gross = 0.0, row_min = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double rx = mx - b.mx[j], ry = my - b.my[j], rz = mz - b.mz[j];
        const double r2 = rx * rx + ry * ry + rz * rz;
        const double dot = dx * b.dx[j] + dy * b.dy[j] + dz * b.dz[j];
        const double inv = 1.0 / std::sqrt(r2);
        row += dot * inv;
        row_gross += std::abs(dot) * inv;
        row_min = std::min(row_min, r2);
      }
      sum.add(row);
      gross.add(row_gross);
      min_d2 = std::min(min_d2, row_min);
    }
    partial[blk] = {sum.value(), gross.value(), min_d2};
  });
  CompensatedSum total, gross;
  double min_d2 = std::numeric_limits<double>::infinity();
  for (const auto& p : partial) {
    total.add(p.sum);
    gross.add(p.gross);
    min_d2 = std::min(min_d2, p.min_distance);
  }
  return {kMu0Over4Pi * total.value(), kMu0Over4Pi * gross.value(), std::sqrt(min_d2)};
}

CouplingResult neumann_coupling(const FilamentCoil& tx, const FilamentCoil& rx,
                                const CouplingOptions& opt) {
  const double clearance = std::max(tx.wire_diameter(), rx.wire_diameter());
  double previous = 0.0;
  double estimate = std::numeric_limits<double>::infinity();
  for (int level = 0; level <= opt.max_refinements; ++level) {
    const std::size_t pieces = std::size_t{1} << level;
    const auto s = neumann_sum(segment_arrays(tx, pieces), segment_arrays(rx, pieces));
    if (level == 0 && clearance > 0 && s.min_distance <= clearance) {
      throw SeparationError("coils are closer than the wire diameter (" +
                            std::to_string(s.min_distance) + " m)");
    }
    if (level > 0) {
      const double scale = std::max(std::abs(s.sum), 1e-6 * s.gross);
      estimate = scale > 0 ? std::abs(s.sum - previous) / scale : 0.0;
      if (estimate < opt.tolerance) {
        return {s.sum, 0.0, CouplingMethod::neumann, estimate, level};
      }
    }
    previous = s.sum;
  }
  throw ConvergenceError("Neumann integral did not converge", previous, estimate);
}

}  // namespace

Vec3 b_field(const FilamentCoil& coil, double current, const Vec3& point) {
  const auto arrays = segment_arrays(coil);
  const auto b = biot_savart_unit(arrays, point, 0.5 * coil.wire_diameter());
  if (!b) throw SingularEvaluation("field point lies on the filament");
  return kMu0Over4Pi * current * *b;
}

void PlaneGrid::validate() const {
  if (u_count < 1 || v_count < 1) throw InvalidArgument("grid counts must be >= 1");
  if (!(u_max >= u_min) || !(v_max >= v_min)) throw InvalidArgument("grid ranges must be ordered");
}

Vec3 PlaneGrid::point(int iu, int iv) const {
  const double u = u_count == 1 ? u_min : u_min + (u_max - u_min) * iu / (u_count - 1);
  const double v = v_count == 1 ? v_min : v_min + (v_max - v_min) * iv / (v_count - 1);
  switch (plane) {
    case GridPlane::xy: return {u, v, offset};
    case GridPlane::xz: return {u, offset, v};
    case GridPlane::yz: return {offset, u, v};
  }
  return {u, v, offset};
}

std::vector<FieldSample> field_map(const FilamentCoil& coil, double current, const PlaneGrid& grid) {
  grid.validate();
  const auto arrays = segment_arrays(coil);
  const double exclusion = 0.5 * coil.wire_diameter();
  std::vector<FieldSample> samples(static_cast<std::size_t>(grid.u_count) * grid.v_count);
  parallel_for(samples.size(), [&](std::size_t idx) {
    const int iv = static_cast<int>(idx / grid.u_count);
    const int iu = static_cast<int>(idx % grid.u_count);
    FieldSample& s = samples[idx];
    s.position = grid.point(iu, iv);
    if (auto b = biot_savart_unit(arrays, s.position, exclusion)) {
      s.b = kMu0Over4Pi * current * *b;
    }
  });
  return samples;
}

FluxResult flux_through(const FilamentCoil& tx, const FilamentCoil& rx, double current,
                        double tolerance) {
  if (current == 0.0) return {0.0, 0.0, 0};
  const auto arrays = segment_arrays(tx);
  const double exclusion = 0.5 * tx.wire_diameter();
  const auto disks = rx.turn_disks();
  constexpr int kMaxLevel = 4;

  struct QuadPoint {
    Vec3 position;
    Vec3 weighted_normal;
  };

  double previous = 0.0;
  double estimate = std::numeric_limits<double>::infinity();
  for (int level = 0; level <= kMaxLevel; ++level) {
    const int n_r = 8 << level;
    const int n_phi = 16 << level;
    const auto rule = gauss_legendre(n_r);
    std::vector<QuadPoint> points;
    points.reserve(disks.size() * n_r * n_phi);
    for (const auto& disk : disks) {
      Vec3 u, v;
      orthonormal_basis(disk.normal, u, v);
      for (int ir = 0; ir < n_r; ++ir) {
        const double s = 0.5 * disk.radius * (1.0 + rule.nodes[ir]);
        const double w_r = 0.5 * disk.radius * rule.weights[ir] * s;
        for (int ip = 0; ip < n_phi; ++ip) {
          const double phi = 2.0 * kPi * (ip + 0.5) / n_phi;
          const double w = w_r * 2.0 * kPi / n_phi;
          points.push_back({disk.center + s * (std::cos(phi) * u + std::sin(phi) * v),
                            w * disk.normal});
        }
      }
    }
    std::vector<double> contrib(points.size()), magnitude(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
      const auto b = biot_savart_unit(arrays, points[i].position, exclusion);
      if (!b) throw SingularEvaluation("flux quadrature point lies on the transmitter filament");
      contrib[i] = b->dot(points[i].weighted_normal);
      magnitude[i] = b->norm() * points[i].weighted_normal.norm();
    });
    CompensatedSum total, gross;
    for (std::size_t i = 0; i < points.size(); ++i) {
      total.add(contrib[i]);
      gross.add(magnitude[i]);
    }
    const double flux = kMu0Over4Pi * current * total.value();
    if (level > 0) {
      const double scale = std::max(std::abs(flux), 1e-9 * kMu0Over4Pi * std::abs(current) * gross.value());
      estimate = scale > 0 ? std::abs(flux - previous) / scale : 0.0;
      if (estimate < tolerance) return {flux, estimate, level};
    }
    previous = flux;
  }
  throw ConvergenceError("flux quadrature did not converge", previous, estimate);
}

CouplingResult& CouplingResult::with_inductances(double l_tx, double l_rx) {
  coupling = coupling_coefficient(mutual_inductance, l_tx, l_rx);
  return *this;
}

CouplingResult mutual_inductance(const FilamentCoil& tx, const FilamentCoil& rx,
                                 const CouplingOptions& options) {
  if (!(options.tolerance > 0)) throw InvalidArgument("coupling tolerance must be > 0");
  if (options.method == CouplingMethod::neumann) return neumann_coupling(tx, rx, options);

  const auto flux = flux_through(tx, rx, 1.0, std::min(options.tolerance, kDefaultFluxTolerance));
  return {flux.flux, 0.0, CouplingMethod::flux, flux.convergence_estimate, flux.refinement_level};
}

double coupling_coefficient(double mutual, double l_tx, double l_rx) {
  if (!(l_tx > 0) || !(l_rx > 0)) throw InvalidArgument("inductances must be > 0");
  const double k = std::abs(mutual) / std::sqrt(l_tx * l_rx);
  if (!(k < 1.0)) throw InvalidArgument("coupling coefficient >= 1: inconsistent M and L values");
  return k;
}

namespace {

// AGM for K(k) together with sum_{n>=1} 2^(n-1) c_n^2, so that
// E = K (1 - k^2/2 - tail). c_n is advanced as c^2 / (4 a) to avoid the
// a - b cancellation once the means have nearly met.
struct AgmResult {
  double k;
  double tail;
};

AgmResult elliptic_agm(double modulus) {
  double a = 1.0;
  double b = std::sqrt((1.0 - modulus) * (1.0 + modulus));
  double c = modulus;
  double power = 0.5;
  double tail = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double an = 0.5 * (a + b);
    c = c * c / (4.0 * an);
    b = std::sqrt(a * b);
    a = an;
    power *= 2.0;
    tail += power * c * c;
    if (c <= 1e-17 * a) break;
  }
  return {kPi / (2.0 * a), tail};
}

}  // namespace

EllipticKE complete_elliptic_integrals(double modulus) {
  if (!(modulus >= 0.0 && modulus < 1.0)) throw InvalidArgument("elliptic modulus must be in [0, 1)");
  const auto r = elliptic_agm(modulus);
  return {r.k, r.k * (1.0 - 0.5 * modulus * modulus - r.tail)};
}

double coaxial_mutual_oracle(double r1, double r2, double z) {
  if (!(r1 > 0) || !(r2 > 0)) throw InvalidArgument("loop radii must be > 0");
  if (z == 0.0 && r1 == r2) throw InvalidArgument("coincident loops: mutual inductance is singular");
  const double k2 = 4.0 * r1 * r2 / ((r1 + r2) * (r1 + r2) + z * z);
  const double k = std::sqrt(k2);
  // (2/k - k) K - (2/k) E == (2/k) K tail, which stays accurate for small k.
  const auto r = elliptic_agm(k);
  return kMu0 * std::sqrt(r1 * r2) * (2.0 / k) * r.k * r.tail;
}

const char* to_string(CouplingMethod m) {
  return m == CouplingMethod::neumann ? "neumann" : "flux";
}

}  // namespace mqslink

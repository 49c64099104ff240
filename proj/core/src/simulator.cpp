#include "drillcoax/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "simulator";
constexpr double kDeg = std::numbers::pi / 180.0;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(kModule, what);
}

struct Hit {
  double depth = 0.0;
  double cos_incidence = 1.0;
  Label label = Label::blade_back;
};

// Nearest surface point along the ray s * u (s decreasing from the sensor).
Hit intersect(const DrillSpec& spec, double D, double x, double sin_t, double cos_t) {
  const Point2 c = axis_center(spec, x);
  const double uc = sin_t * c[0] + cos_t * c[1];
  const double c2 = c[0] * c[0] + c[1] * c[1];
  const double r_max = x < spec.shank_length ? spec.shank_radius() : spec.radius();

  auto surface_at = [&](double s, SurfaceSample& out) {
    const double vy = s * sin_t - c[0];
    const double vz = s * cos_t - c[1];
    out = drill_surface(spec, x, std::atan2(vy, vz));
    return std::hypot(vy, vz);
  };

  SurfaceSample surf;
  double rho = r_max;
  double s = 0.0;
  bool converged = false;
  for (int it = 0; it < 64; ++it) {
    s = uc + std::sqrt(uc * uc - c2 + rho * rho);
    surface_at(s, surf);
    if (std::abs(surf.radius - rho) <= 1e-12) {
      converged = true;
      break;
    }
    rho = surf.radius;
  }
  if (!converged) {
    // March inward from the bounding circle, then bisect the crossing.
    double hi = uc + std::sqrt(uc * uc - c2 + r_max * r_max);
    double lo = hi;
    for (;;) {
      lo -= 0.005;
      if (surface_at(lo, surf) - surf.radius <= 0.0) break;
      hi = lo;
    }
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (surface_at(mid, surf) - surf.radius <= 0.0) lo = mid;
      else hi = mid;
    }
    s = hi;
    surface_at(s, surf);
  }

  Hit h;
  h.depth = D - s;
  h.label = surf.label;
  const double vy = s * sin_t - c[0];
  const double vz = s * cos_t - c[1];
  const double r = std::hypot(vy, vz);
  const double er_u = (vy * sin_t + vz * cos_t) / r;    // e_r . u
  const double ep_u = (vz * sin_t - vy * cos_t) / r;    // e_psi . u
  const double k = x < spec.shank_length ? 0.0 : 2.0 * std::numbers::pi / spec.helix_pitch;
  const double g = surf.slope / r;
  const double n_u = er_u - g * ep_u;
  h.cos_incidence = std::abs(n_u) / std::sqrt(1.0 + g * g + (k * surf.slope) * (k * surf.slope));
  return h;
}

}  // namespace

void DrillSpec::validate() const {
  require(shank_length > 0.0 && working_length > 0.0, "drill lengths must be positive");
  require(shank_diameter > 0.0 && working_diameter > 0.0, "drill diameters must be positive");
  require(flute_count >= 1, "flute_count must be >= 1");
  require(helix_pitch > 0.0, "helix pitch must be positive");
  require(blade_back_deg > 0.0 && blade_lip_deg >= 0.0, "blade back width must be positive, lip width >= 0");
  require(groove_deg() >= 0.0, "blade back + lip widths exceed 360 / flute_count");
  require(lip_ramp_deg >= 0.0 && lip_ramp_deg <= blade_lip_deg, "lip ramp must lie within the lip");
  require(groove_flat_deg >= 0.0 && (groove_deg() == 0.0 || groove_flat_deg < groove_deg()),
          "groove flat must be narrower than the groove");
  require(lip_height >= 0.0 && lip_height < radius(), "lip height must be in [0, R)");
  require(groove_depth >= lip_height && groove_depth < radius(), "groove depth must be in [lip_height, R)");
  require(bend.apex_x > shank_length && bend.apex_x <= tip_x(), "bend apex must lie on the working part");
  require(tip_x() - bend.apex_x <= std::numbers::sqrt2 * (bend.apex_x - shank_length),
          "bend apex too close to the shank: the bow would exceed its amplitude at the tip");
  const double min_radius = std::min(shank_radius(), radius() - groove_depth);
  require(std::abs(bend.amplitude) < min_radius, "bend amplitude must be smaller than the innermost radius");
}

void OcclusionModel::validate() const {
  require(incidence_limit_deg > 0.0 && incidence_limit_deg <= 90.0, "incidence limit must be in (0, 90] deg");
  require(dof_near > 0.0 && dof_far > dof_near, "depth of field requires 0 < near < far");
  require(fov_near > 0.0 && fov_far > 0.0, "field-of-view widths must be positive");
}

double OcclusionModel::fov_width(double depth) const {
  return fov_near + (depth - dof_near) / (dof_far - dof_near) * (fov_far - fov_near);
}

double bend_offset(const DrillSpec& spec, double x) {
  if (x < spec.shank_length || spec.bend.amplitude == 0.0) return 0.0;
  const double u = (x - spec.bend.apex_x) / (spec.bend.apex_x - spec.shank_length);
  return spec.bend.amplitude * (1.0 - u * u);
}

Point2 axis_center(const DrillSpec& spec, double x) {
  const double b = bend_offset(spec, x);
  const double phi = spec.bend.phi_deg * kDeg;
  return {b * std::sin(phi), b * std::cos(phi)};
}

double true_coaxiality(const DrillSpec& spec) {
  const double peak = std::abs(bend_offset(spec, spec.bend.apex_x));
  const double tip = std::abs(bend_offset(spec, spec.tip_x()));
  return 2.0 * std::max(peak, tip);
}

SurfaceSample drill_surface(const DrillSpec& spec, double x, double psi) {
  if (x < spec.shank_length) return {spec.shank_radius(), 0.0, Label::blade_back};

  const double R = spec.radius();
  const double period = 360.0 / spec.flute_count;
  const double twist = 360.0 * (x - spec.shank_length) / spec.helix_pitch;
  double a = std::fmod(psi / kDeg - twist, period);
  if (a < 0.0) a += period;

  const double back = spec.blade_back_deg;
  if (a < back) return {R, 0.0, Label::blade_back};
  a -= back;
  const double h = spec.lip_height;
  if (a < spec.lip_ramp_deg) {
    return {R - h * a / spec.lip_ramp_deg, -h / (spec.lip_ramp_deg * kDeg), Label::background};
  }
  if (a < spec.blade_lip_deg) return {R - h, 0.0, Label::background};
  a -= spec.blade_lip_deg;
  const double g = spec.groove_depth;
  const double wall = 0.5 * (spec.groove_deg() - spec.groove_flat_deg);
  if (a < wall) return {R - h - (g - h) * a / wall, -(g - h) / (wall * kDeg), Label::background};
  a -= wall;
  if (a < spec.groove_flat_deg) return {R - g, 0.0, Label::background};
  a -= spec.groove_flat_deg;
  return {R - g + g * std::min(a, wall) / wall, g / (wall * kDeg), Label::background};
}

std::uint64_t frame_seed(std::uint64_t seed, int frame) {
  // splitmix64 finaliser over the pair.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(frame) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SimulatedScan scan_drill(const DrillSpec& spec, ScanMeta meta, const OcclusionModel& occlusion,
                         const ScanOptions& options) {
  spec.validate();
  occlusion.validate();
  if (meta.gamma <= 0.0) meta.gamma = spec.radius();
  meta.validate();
  require(meta.points_per_frame >= 2, "points_per_frame must be >= 2");
  require(options.x_max > options.x_min, "sample range requires x_min < x_max");
  require(options.noise_sigma >= 0.0, "noise sigma must be >= 0");
  require(options.outlier_fraction >= 0.0 && options.outlier_fraction <= 1.0, "outlier fraction must be in [0, 1]");
  require(options.outlier_max >= options.outlier_min && options.outlier_min >= 0.0, "invalid outlier offset range");
  const double r_outer = std::max(spec.radius(), spec.shank_radius());
  require(meta.axis_distance > r_outer + std::abs(spec.bend.amplitude),
          "axis distance D must exceed the drill radius plus bend amplitude");
  if (options.x_min > 0.0 || options.x_max < spec.tip_x()) {
    throw SimulationError(kModule, "frame 0: drill spans [0, " + std::to_string(spec.tip_x()) +
                                       "] mm but the sensor samples only [" + std::to_string(options.x_min) + ", " +
                                       std::to_string(options.x_max) + "]");
  }

  const int J = meta.points_per_frame;
  std::vector<double> xs(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) xs[j] = options.x_min + (options.x_max - options.x_min) * j / (J - 1);
  const double cos_limit = std::cos(occlusion.incidence_limit_deg * kDeg);

  SimulatedScan out;
  out.scan.meta = meta;
  out.scan.frames.resize(static_cast<std::size_t>(meta.frame_count));
  for (int i = 0; i < meta.frame_count; ++i) {
    const double theta = frame_angle(i, meta.frame_count);
    const double st = std::sin(theta), ct = std::cos(theta);
    std::mt19937_64 rng(frame_seed(options.seed, i));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto& frame = out.scan.frames[static_cast<std::size_t>(i)];
    frame.index = i;
    for (double x : xs) {
      if (x < 0.0 || x > spec.tip_x()) continue;
      const Hit hit = intersect(spec, meta.axis_distance, x, st, ct);
      if (hit.depth < occlusion.dof_near || hit.depth > occlusion.dof_far) continue;
      if (std::abs(x - occlusion.fov_center_x) > 0.5 * occlusion.fov_width(hit.depth)) {
        throw SimulationError(kModule, "frame " + std::to_string(i) + ": drill leaves the field of view at x = " +
                                           std::to_string(x) + " mm (depth " + std::to_string(hit.depth) + " mm)");
      }
      if (hit.cos_incidence < cos_limit) continue;
      double z = hit.depth;
      if (options.noise_sigma > 0.0) z += options.noise_sigma * noise(rng);
      std::uint8_t outlier = 0;
      if (options.outlier_fraction > 0.0 && unit(rng) < options.outlier_fraction) {
        const double mag = options.outlier_min + (options.outlier_max - options.outlier_min) * unit(rng);
        z += unit(rng) < 0.5 ? -mag : mag;
        outlier = 1;
      }
      frame.points.push_back({x, z});
      out.truth.labels.push_back(hit.label);
      out.truth.outlier.push_back(outlier);
    }
  }
  out.truth.true_coaxiality = true_coaxiality(spec);
  out.truth.apex_x = spec.bend.apex_x;
  out.truth.phi_deg = spec.bend.phi_deg;
  return out;
}

void CalibrationBlockSpec::validate() const {
  require(l_a > 0.0 && l_b > 0.0 && l_c > 0.0 && l_d > 0.0, "calibration block lengths must be positive");
  require(std::abs(l_b + l_c + l_d - l_a) <= 1e-9, "l_b + l_c + l_d must equal l_a");
  require(d_a > 0.0 && d_b > d_a, "calibration block needs 0 < d_a < d_b");
}

SimulatedCalibration scan_calibration_block(const CalibrationBlockSpec& block, const CalibrationScanOptions& options) {
  block.validate();
  require(options.axis_distance > 0.0, "axis distance must be positive");
  require(options.frames >= 4, "calibration scan needs >= 4 frames");
  require(options.best_frame >= 0 && options.best_frame < options.frames, "best frame outside the scan");
  require(options.lateral_step > 0.0, "lateral step must be positive");
  require(options.points_per_frame >= 2, "points_per_frame must be >= 2");
  require(options.x_max > options.x_min, "sample range requires x_min < x_max");
  require(options.noise_sigma >= 0.0, "noise sigma must be >= 0");

  const double r_a = 0.5 * block.d_a;
  const double r_b = 0.5 * block.d_b;
  const double collar_lo = block.l_b;
  const double collar_hi = block.l_b + block.l_c;
  const double collar_mid = 0.5 * (collar_lo + collar_hi);
  const double base = options.axis_distance + r_b;

  SimulatedCalibration out;
  out.true_D = options.axis_distance;
  out.true_best_frame = options.best_frame;
  out.scan.meta = {options.frames, options.points_per_frame, options.axis_distance, 1.0};
  const int J = options.points_per_frame;
  for (int i = 0; i < options.frames; ++i) {
    const double e = (i - options.best_frame) * options.lateral_step;
    std::mt19937_64 rng(frame_seed(options.seed, i));
    std::normal_distribution<double> noise(0.0, 1.0);
    SensorFrame frame;
    frame.index = i;
    for (int j = 0; j < J; ++j) {
      const double x = options.x_min + (options.x_max - options.x_min) * j / (J - 1);
      if (x < 0.0 || x > block.l_a) continue;
      const double r = (x >= collar_lo && x <= collar_hi) ? r_b : r_a;
      if (std::abs(e) >= r) continue;
      double z = base - std::sqrt(r * r - e * e);
      if (block.roll_slope != 0.0) z += block.roll_slope * (x - collar_mid);
      if (options.noise_sigma > 0.0) z += options.noise_sigma * noise(rng);
      frame.points.push_back({x, z});
    }
    out.scan.frames.push_back(std::move(frame));
  }
  return out;
}

}  // namespace drillcoax

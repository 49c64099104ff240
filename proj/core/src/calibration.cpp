#include "drillcoax/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "calibration";

std::size_t nearest_sample(const std::vector<SensorPoint>& pts, double x) {
  auto it = std::lower_bound(pts.begin(), pts.end(), x,
                             [](const SensorPoint& p, double v) { return p.x < v; });
  if (it == pts.end()) return pts.size() - 1;
  if (it == pts.begin()) return 0;
  const auto hi = static_cast<std::size_t>(it - pts.begin());
  return (x - pts[hi - 1].x <= pts[hi].x - x) ? hi - 1 : hi;
}

}  // namespace

RuleIICheck check_rule_II(const CalibrationMarkers& m, double delta_z_threshold, double spacing_tolerance) {
  const double xs[4] = {m.a.x, m.b.x, m.c.x, m.d.x};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (xs[i] == xs[j]) {
        throw DegenerateInputError(kModule, "calibration markers share x = " + std::to_string(xs[i]));
      }
    }
  }
  RuleIICheck out;
  const double ab = m.b.x - m.a.x;
  const double bc = m.c.x - m.b.x;
  const double cd = m.d.x - m.c.x;
  out.spacing_residual = std::max(std::abs(ab - bc), std::abs(bc - cd));
  out.delta_z = std::abs(m.d.z - m.a.z);
  out.pass = out.spacing_residual <= spacing_tolerance && out.delta_z <= delta_z_threshold;
  return out;
}

bool check_rule_I(const CalibrationMarkers& m, double x_min, double x_max) {
  const double xs[4] = {m.a.x, m.b.x, m.c.x, m.d.x};
  for (int i = 0; i < 4; ++i) {
    if (xs[i] < x_min || xs[i] > x_max) return false;
    if (i > 0 && !(xs[i] > xs[i - 1])) return false;
  }
  return true;
}

ClosestFrame locate_closest_frame(std::span<const double> z_b, std::span<const double> z_c) {
  if (z_b.empty() || z_b.size() != z_c.size()) {
    throw ConfigError(kModule, "ladder sequences must be nonempty and of equal length");
  }
  const std::size_t n = z_b.size();
  std::vector<double> sum(n);
  for (std::size_t i = 0; i < n; ++i) sum[i] = z_b[i] + z_c[i];

  ClosestFrame out;
  out.index = static_cast<std::size_t>(std::min_element(sum.begin(), sum.end()) - sum.begin());
  out.at_boundary = out.index == 0 || out.index + 1 == n;
  out.strict_minimum = !out.at_boundary && sum[out.index] < sum[out.index - 1] && sum[out.index] < sum[out.index + 1];

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (i != out.index && sum[i] < sum[i - 1] && sum[i] < sum[i + 1]) out.other_local_minima.push_back(i);
  }
  return out;
}

CalibrationResult solve_D(std::span<const double> z_b, std::span<const double> z_c) {
  const auto best = locate_closest_frame(z_b, z_c);
  CalibrationResult r;
  r.best_frame = static_cast<int>(best.index);
  r.D = 0.5 * (z_b[best.index] + z_c[best.index]);
  r.pass_rule_III = best.strict_minimum;
  r.boundary_warning = best.at_boundary;
  for (auto i : best.other_local_minima) r.other_local_minima.push_back(static_cast<int>(i));
  return r;
}

std::optional<CalibrationMarkers> extract_markers(const SensorFrame& frame, double jump_threshold) {
  const auto& pts = frame.points;
  if (pts.size() < 4) return std::nullopt;

  // Two largest |dz| between consecutive samples.
  std::size_t first = 0, second = 0;
  double first_mag = -1.0, second_mag = -1.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mag = std::abs(pts[i + 1].z - pts[i].z);
    if (mag > first_mag) {
      second = first;
      second_mag = first_mag;
      first = i;
      first_mag = mag;
    } else if (mag > second_mag) {
      second = i;
      second_mag = mag;
    }
  }
  if (second_mag < jump_threshold) return std::nullopt;
  const std::size_t lo = std::min(first, second);
  const std::size_t hi = std::max(first, second);
  if (hi <= lo) return std::nullopt;

  CalibrationMarkers m;
  m.b = pts[lo + 1];
  m.c = pts[hi];
  const double step = m.c.x - m.b.x;
  if (!(step > 0.0)) return std::nullopt;
  const double xa = m.b.x - step;
  const double xd = m.c.x + step;
  if (xa < pts.front().x || xd > pts.back().x) return std::nullopt;
  m.a = pts[nearest_sample(pts, xa)];
  m.d = pts[nearest_sample(pts, xd)];
  return m;
}

CalibrationResult calibrate(const ScanSet& scan, const CalibrationOptions& options) {
  std::vector<double> zb, zc;
  std::vector<int> frame_ids;
  std::vector<CalibrationMarkers> markers;
  for (const auto& frame : scan.frames) {
    auto m = extract_markers(frame, options.jump_threshold);
    if (!m) continue;
    zb.push_back(m->b.z);
    zc.push_back(m->c.z);
    frame_ids.push_back(frame.index);
    markers.push_back(*m);
  }
  if (markers.empty()) {
    throw DataDeficiencyError(kModule, "no frame shows the calibration ladder (check jump threshold and Rule I)");
  }

  auto result = solve_D(zb, zc);
  const auto best = static_cast<std::size_t>(result.best_frame);
  result.best_frame = frame_ids[best];
  for (auto& i : result.other_local_minima) i = frame_ids[static_cast<std::size_t>(i)];

  const auto& m = markers[best];
  result.pass_rule_I = check_rule_I(m, options.x_min, options.x_max);
  const auto rule2 = check_rule_II(m, options.delta_z_threshold, options.spacing_tolerance);
  result.pass_rule_II = rule2.pass;
  result.delta_z = rule2.delta_z;
  result.spacing_residual = rule2.spacing_residual;
  return result;
}

}  // namespace drillcoax

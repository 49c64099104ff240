#include "drillcoax/axis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <cstdio>
#include <string>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "axis-reconstruction";

std::string fixed3(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", deg);
  return buf;
}

std::size_t distinct_x(std::span<const ProfileSample> s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i == 0 || s[i].x != s[i - 1].x) ++n;
  }
  return n;
}

// Blade-back points sorted by x for repeated slab queries.
struct SlabIndex {
  std::vector<double> x;
  std::vector<Point2> yz;

  explicit SlabIndex(const MeasurementCloud& cloud) {
    std::vector<std::size_t> order;
    order.reserve(cloud.points.size());
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
      if (cloud.points[i].label == Label::blade_back) order.push_back(i);
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return cloud.points[a].x < cloud.points[b].x; });
    x.reserve(order.size());
    yz.reserve(order.size());
    for (auto i : order) {
      x.push_back(cloud.points[i].x);
      yz.push_back({cloud.points[i].y, cloud.points[i].z});
    }
  }

  std::vector<Point2> slab(double x0, double half_width) const {
    const auto lo = std::lower_bound(x.begin(), x.end(), x0 - half_width);
    const auto hi = std::upper_bound(x.begin(), x.end(), x0 + half_width);
    return {yz.begin() + (lo - x.begin()), yz.begin() + (hi - x.begin())};
  }
};

CrossSection fit_section(const SlabIndex& index, double x0, double half_width) {
  CrossSection s;
  s.x = x0;
  s.points = index.slab(x0, half_width);
  if (s.points.size() < 3) {
    throw DataDeficiencyError(kModule, "cross section at x = " + fixed3(x0) + " mm holds " +
                                           std::to_string(s.points.size()) + " blade-back points");
  }
  s.fit = fit_circle(s.points);
  return s;
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2) return *mid;
  return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

}  // namespace

std::vector<ProfileSample> collect_profile(const MeasurementCloud& cloud, const ScanMeta& meta, double angle_deg,
                                           int window_frames) {
  if (meta.frame_count <= 0) throw ConfigError(kModule, "frame_count must be positive");
  if (window_frames < 0) throw ConfigError(kModule, "profile window must be >= 0 frames");
  const double frames = static_cast<double>(meta.frame_count);
  double target = std::fmod(angle_deg / 360.0 * frames, frames);
  if (target < 0.0) target += frames;

  std::vector<ProfileSample> out;
  for (const auto& p : cloud.points) {
    if (p.label != Label::blade_back) continue;
    double d = std::abs(static_cast<double>(p.frame) - target);
    d = std::min(d, frames - d);
    if (d > window_frames + 1e-9) continue;
    out.push_back({p.x, meta.axis_distance - std::hypot(p.y, p.z)});
  }
  std::stable_sort(out.begin(), out.end(), [](const ProfileSample& a, const ProfileSample& b) { return a.x < b.x; });
  return out;
}

std::vector<ProfileSample> bin_profile(std::span<const ProfileSample> samples, double bin_width, int min_samples) {
  if (bin_width <= 0.0) return {samples.begin(), samples.end()};
  std::vector<ProfileSample> out;
  std::vector<double> zs;
  for (std::size_t i = 0; i < samples.size();) {
    const double bin = std::floor(samples[i].x / bin_width);
    std::size_t j = i;
    double sx = 0.0;
    zs.clear();
    while (j < samples.size() && std::floor(samples[j].x / bin_width) == bin) {
      sx += samples[j].x;
      zs.push_back(samples[j].z);
      ++j;
    }
    if (j - i >= static_cast<std::size_t>(std::max(min_samples, 1))) {
      out.push_back({sx / static_cast<double>(j - i), median(zs)});
    }
    i = j;
  }
  return out;
}

std::size_t reject_outlier_knots(std::vector<ProfileSample>& knots, double window, double tolerance) {
  if (!(window > 0.0) || !(tolerance > 0.0)) return 0;
  constexpr std::size_t kMinNeighbours = 4;
  std::size_t removed = 0;
  std::vector<std::size_t> near;
  for (;;) {
    double worst = tolerance;
    std::size_t worst_i = knots.size();
    for (std::size_t i = 0; i < knots.size(); ++i) {
      // Neighbours within the window; when that is sparse, the two nearest
      // knots on each side so that a stray cluster is judged by interpolating
      // across it rather than by extrapolating through its own members.
      near.clear();
      for (std::size_t j = 0; j < knots.size(); ++j) {
        if (j != i && std::abs(knots[j].x - knots[i].x) <= window) near.push_back(j);
      }
      if (near.size() < kMinNeighbours) {
        near.clear();
        for (std::size_t k = 1; k <= kMinNeighbours / 2; ++k) {
          if (i >= k) near.push_back(i - k);
          if (i + k < knots.size()) near.push_back(i + k);
        }
      }
      const std::size_t n = near.size();
      if (n < 2) continue;

      double mx = 0.0, mz = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        mx += knots[near[k]].x;
        mz += knots[near[k]].z;
      }
      mx /= static_cast<double>(n);
      mz /= static_cast<double>(n);
      double sxx = 0.0, sxz = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        sxx += (knots[near[k]].x - mx) * (knots[near[k]].x - mx);
        sxz += (knots[near[k]].x - mx) * (knots[near[k]].z - mz);
      }
      const double slope = sxx > 1e-12 ? sxz / sxx : 0.0;
      const double r = std::abs(knots[i].z - (mz + slope * (knots[i].x - mx)));
      if (r > worst) {
        worst = r;
        worst_i = i;
      }
    }
    if (worst_i == knots.size()) return removed;
    knots.erase(knots.begin() + static_cast<std::ptrdiff_t>(worst_i));
    ++removed;
  }
}

std::array<AxialProfile, 4> extract_profiles(const MeasurementCloud& cloud, const ScanMeta& meta,
                                             const ProfileOptions& options) {
  std::array<AxialProfile, 4> out;
  for (int k = 0; k < 4; ++k) {
    auto& p = out[static_cast<std::size_t>(k)];
    p.slot = k;
    p.angle_deg = options.theta_deg + 90.0 * k;
    for (int attempt = 0; attempt < 2; ++attempt) {
      p.window_frames = options.window_frames * (attempt + 1);
      p.samples = collect_profile(cloud, meta, p.angle_deg, p.window_frames);
      p.knots = bin_profile(p.samples, options.bin_width, options.min_bin_samples);
      p.rejected = reject_outlier_knots(p.knots, options.outlier_window, options.outlier_tolerance);
      if (distinct_x(p.knots) >= 3) break;
    }
    if (distinct_x(p.knots) < 3) {
      throw DataDeficiencyError(kModule, "no usable blade-back profile at " + fixed3(p.angle_deg) +
                                             " deg (occlusion or excessive bend); try another theta");
    }
    std::vector<double> xs(p.knots.size()), zs(p.knots.size());
    for (std::size_t i = 0; i < p.knots.size(); ++i) {
      xs[i] = p.knots[i].x;
      zs[i] = p.knots[i].z;
    }
    p.spline = QuadraticSpline::fit(xs, zs);
  }
  return out;
}

const char* to_string(DeviationKind kind) {
  switch (kind) {
    case DeviationKind::absv: return "absv";
    case DeviationKind::absh: return "absh";
    case DeviationKind::squabs: return "squabs";
  }
  return "unknown";
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ConfigError(kModule, "grid step must be positive");
  if (!(hi >= lo)) throw RangeError(kModule, "profiles do not overlap along x");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::min(lo + step * static_cast<double>(i), hi);
  return g;
}

DeviationProfile difference_profiles(const QuadraticSpline& a, const QuadraticSpline& b,
                                     std::span<const double> grid, DeviationKind kind) {
  DeviationProfile d;
  d.kind = kind;
  d.x.assign(grid.begin(), grid.end());
  d.z.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) d.z[i] = std::abs(a(grid[i]) - b(grid[i]));
  return d;
}

DeviationProfile synthesize(const DeviationProfile& absv, const DeviationProfile& absh) {
  if (absv.x != absh.x || absv.z.size() != absv.x.size() || absh.z.size() != absh.x.size()) {
    throw ConfigError(kModule, "ABSV and ABSH must share one x grid");
  }
  DeviationProfile s;
  s.kind = DeviationKind::squabs;
  s.x = absv.x;
  s.z.resize(s.x.size());
  for (std::size_t i = 0; i < s.x.size(); ++i) s.z[i] = std::hypot(absh.z[i], absv.z[i]);
  return s;
}

std::vector<double> locate_max_deviation(const DeviationProfile& squabs, double delta_z_s) {
  if (squabs.z.empty()) throw DataDeficiencyError(kModule, "deviation profile is empty");
  if (!(delta_z_s >= 0.0)) throw ConfigError(kModule, "delta_z_s must be >= 0");
  const double top = *std::max_element(squabs.z.begin(), squabs.z.end());
  std::vector<double> xs;
  for (std::size_t i = 0; i < squabs.z.size(); ++i) {
    if (squabs.z[i] >= top - delta_z_s) xs.push_back(squabs.x[i]);
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

std::vector<Point2> section_points(const MeasurementCloud& cloud, double x0, double half_width) {
  std::vector<Point2> out;
  for (const auto& p : cloud.points) {
    if (p.label == Label::blade_back && std::abs(p.x - x0) <= half_width) out.push_back({p.y, p.z});
  }
  return out;
}

AxisResult reconstruct_axis(const MeasurementCloud& cloud, const ScanMeta& meta, const AxisOptions& options) {
  if (options.shank_sections < 1) throw ConfigError(kModule, "shank_sections must be >= 1");
  if (!(options.shank_max > options.shank_min)) throw ConfigError(kModule, "shank range requires min < max");
  if (options.grid_step < 0.0 || options.section_half_width < 0.0) {
    throw ConfigError(kModule, "grid step and section half-width must be >= 0");
  }

  AxisResult r;
  r.profiles = extract_profiles(cloud, meta, options.profile);

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<double> spacing;
  for (const auto& p : r.profiles) {
    lo = std::max(lo, p.spline.x_min());
    hi = std::min(hi, p.spline.x_max());
    const auto& k = p.spline.knots();
    for (std::size_t i = 1; i < k.size(); ++i) spacing.push_back(k[i] - k[i - 1]);
  }
  r.grid_step = options.grid_step > 0.0 ? options.grid_step : median(spacing);
  const auto grid = uniform_grid(lo, hi, r.grid_step);

  r.absv = difference_profiles(r.profiles[0].spline, r.profiles[2].spline, grid, DeviationKind::absv);
  r.absh = difference_profiles(r.profiles[1].spline, r.profiles[3].spline, grid, DeviationKind::absh);
  r.squabs = synthesize(r.absv, r.absh);
  r.xsm = locate_max_deviation(r.squabs, options.delta_z_s);
  r.peak_x = r.squabs.x[static_cast<std::size_t>(std::max_element(r.squabs.z.begin(), r.squabs.z.end()) -
                                                 r.squabs.z.begin())];
  // Near a smooth apex SquABS is flat to within noise, so the argmax wanders
  // across the band; its centre is far steadier.
  r.located_x = 0.5 * (r.xsm.front() + r.xsm.back());

  const SlabIndex index(cloud);
  const double half = options.section_half_width > 0.0 ? options.section_half_width : 0.5 * r.grid_step;
  const double shank_step = (options.shank_max - options.shank_min) / options.shank_sections;
  Point2 sum{0.0, 0.0};
  for (int k = 0; k < options.shank_sections; ++k) {
    auto s = fit_section(index, options.shank_min + (k + 0.5) * shank_step, half);
    sum[0] += s.fit.center[0];
    sum[1] += s.fit.center[1];
    r.shank.push_back(std::move(s));
  }
  r.benchmark = {sum[0] / options.shank_sections, sum[1] / options.shank_sections};
  for (auto& s : r.shank) s.distance = std::hypot(s.fit.center[0] - r.benchmark[0], s.fit.center[1] - r.benchmark[1]);

  std::vector<Point2> centers;
  for (double x : r.xsm) {
    auto s = fit_section(index, x, half);
    s.distance = std::hypot(s.fit.center[0] - r.benchmark[0], s.fit.center[1] - r.benchmark[1]);
    centers.push_back(s.fit.center);
    r.sections.push_back(std::move(s));
  }
  r.coaxiality = coaxiality(centers, r.benchmark);
  return r;
}

}  // namespace drillcoax

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace drillcoax::testing {

SimulatedScan simulate(const DrillCase& c) {
  SimulationConfig cfg;
  cfg.drill.bend.amplitude = c.amplitude;
  cfg.drill.bend.phi_deg = c.phi_deg;
  cfg.drill.bend.apex_x = c.apex_x;
  cfg.scan.noise_sigma = c.noise;
  cfg.scan.seed = c.seed;
  cfg.scan.outlier_fraction = c.outlier_fraction;
  return scan_drill(cfg.drill, cfg.meta, cfg.occlusion, cfg.scan);
}

PipelineConfig segmentation_only_config() {
  PipelineConfig cfg;
  cfg.sor_enabled = false;
  return cfg;
}

double point_accuracy(std::span<const Label> predicted, std::span<const Label> truth,
                      std::span<const std::uint8_t> truth_outlier) {
  std::size_t n = 0, ok = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!truth_outlier.empty() && truth_outlier[i]) continue;
    ++n;
    ok += predicted[i] == truth[i];
  }
  return n ? static_cast<double>(ok) / static_cast<double>(n) : 0.0;
}

double patch_accuracy(const SegmentationResult& seg, std::span<const Label> truth) {
  std::size_t n = 0, ok = 0;
  for (std::size_t p = 0; p < seg.grid.patch_count(); ++p) {
    const auto members = seg.grid.members(p);
    if (members.empty()) continue;
    std::size_t back = 0;
    for (auto i : members) back += truth[i] == Label::blade_back;
    ++n;
    // An evenly split patch has no majority; either label is right.
    if (2 * back == members.size()) {
      ++ok;
      continue;
    }
    const Label majority = 2 * back > members.size() ? Label::blade_back : Label::background;
    ok += seg.patch_labels[p] == majority;
  }
  return n ? static_cast<double>(ok) / static_cast<double>(n) : 0.0;
}

double mode_by_counting(std::span<const double> z, double bin_width) {
  std::map<long long, int> counts;
  for (double v : z) ++counts[std::llround(v / bin_width)];
  long long best = 0;
  int best_count = -1;
  for (const auto& [bin, count] : counts) {  // ascending, so ties keep the lowest
    if (count > best_count) {
      best = bin;
      best_count = count;
    }
  }
  return static_cast<double>(best) * bin_width;
}

std::array<double, 3> circumcircle(const std::array<double, 2>& a, const std::array<double, 2>& b,
                                   const std::array<double, 2>& c) {
  const double d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
  const double a2 = a[0] * a[0] + a[1] * a[1];
  const double b2 = b[0] * b[0] + b[1] * b[1];
  const double c2 = c[0] * c[0] + c[1] * c[1];
  const double ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
  const double uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
  return {ux, uy, std::hypot(a[0] - ux, a[1] - uy)};
}

std::vector<double> brute_force_knn_mean(std::span<const std::array<double, 3>> pts, int k) {
  std::vector<double> out(pts.size());
  std::vector<double> d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d.clear();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      d.push_back(std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1], pts[i][2] - pts[j][2]));
    }
    std::sort(d.begin(), d.end());
    double s = 0.0;
    for (int q = 0; q < k; ++q) s += d[static_cast<std::size_t>(q)];
    out[i] = s / k;
  }
  return out;
}

std::array<double, 2> mean_std(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0};
}

}  // namespace drillcoax::testing

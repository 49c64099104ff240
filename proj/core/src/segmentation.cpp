#include "drillcoax/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "segmentation";

int cell_index(double v, double lo, double width, int cells) {
  const int i = static_cast<int>(std::floor((v - lo) / width));
  return std::clamp(i, 0, cells - 1);
}

Label component_label(const GmmModel& m, const double* post) {
  const std::size_t fg = m.foreground();
  double other = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k != fg) other = std::max(other, post[k]);
  }
  return post[fg] >= other ? Label::blade_back : Label::background;
}

Label label_with(const GmmModel& m, double z) {
  const auto post = posterior(m, z);
  return component_label(m, post.data());
}

// Distinct values of `values` with multiplicities; `slot[i]` is the index of
// values[i] among the distinct values.
struct Compressed {
  std::vector<double> values;
  std::vector<double> counts;
  std::vector<std::size_t> slot;
};

Compressed compress(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Compressed c;
  c.slot.resize(values.size());
  for (std::size_t idx : order) {
    if (c.values.empty() || values[idx] != c.values.back()) {
      c.values.push_back(values[idx]);
      c.counts.push_back(0.0);
    }
    c.counts.back() += 1.0;
    c.slot[idx] = c.values.size() - 1;
  }
  return c;
}

EmResult fit_compressed(const Compressed& c, std::span<const double> raw, const EmOptions& em) {
  return em_fit(c.values, c.counts, init_gmm(raw), em);
}

double separation(const GmmModel& m) {
  const auto [lo, hi] = std::minmax_element(m.means.begin(), m.means.end());
  return *hi - *lo;
}

// Mean gap in units of the pooled component spread (Ashman's D).
double bimodality(const GmmModel& m) {
  const double s0 = m.sigmas[0], s1 = m.sigmas[1];
  return std::abs(m.means[1] - m.means[0]) * std::sqrt(2.0 / (s0 * s0 + s1 * s1));
}

}  // namespace

BlockGrid build_grid(const UnrolledCloud& cloud, const GridShape& shape) {
  if (cloud.points.empty()) throw ConfigError(kModule, "cannot grid an empty cloud");
  if (shape.blocks_x < 1 || shape.blocks_y < 1 || shape.patches_x < 1 || shape.patches_y < 1) {
    throw ConfigError(kModule, "block and patch counts must be >= 1");
  }
  if (cloud.points.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError(kModule, "cloud too large for 32-bit point indices");
  }

  BlockGrid g;
  g.shape_ = shape;
  g.x_min_ = g.x_max_ = cloud.points.front().x;
  g.y_min_ = g.y_max_ = cloud.points.front().y;
  for (const auto& p : cloud.points) {
    g.x_min_ = std::min(g.x_min_, p.x);
    g.x_max_ = std::max(g.x_max_, p.x);
    g.y_min_ = std::min(g.y_min_, p.y);
    g.y_max_ = std::max(g.y_max_, p.y);
  }
  if (!(g.x_max_ > g.x_min_) || !(g.y_max_ > g.y_min_)) {
    throw DegenerateInputError(kModule, "cloud bounding box has zero extent along x'' or y''");
  }

  const int cols = shape.blocks_x * shape.patches_x;
  const int rows = shape.blocks_y * shape.patches_y;
  const double cw = (g.x_max_ - g.x_min_) / cols;
  const double rh = (g.y_max_ - g.y_min_) / rows;
  const std::size_t ppb = g.patches_per_block();

  g.point_patch_.resize(cloud.points.size());
  g.offsets_.assign(g.patch_count() + 1, 0);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    const int gx = cell_index(p.x, g.x_min_, cw, cols);
    const int gy = cell_index(p.y, g.y_min_, rh, rows);
    const std::size_t block = static_cast<std::size_t>(gy / shape.patches_y) * shape.blocks_x + gx / shape.patches_x;
    const std::size_t local = static_cast<std::size_t>(gy % shape.patches_y) * shape.patches_x + gx % shape.patches_x;
    const auto patch = static_cast<std::uint32_t>(block * ppb + local);
    g.point_patch_[i] = patch;
    ++g.offsets_[patch + 1];
  }
  for (std::size_t p = 0; p < g.patch_count(); ++p) g.offsets_[p + 1] += g.offsets_[p];
  g.members_.resize(cloud.points.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    g.members_[cursor[g.point_patch_[i]]++] = static_cast<std::uint32_t>(i);
  }
  return g;
}

GridShape default_grid(const UnrolledCloud& cloud, const ScanMeta& meta, const GridSizing& sizing) {
  if (cloud.points.empty()) throw ConfigError(kModule, "cannot size a grid for an empty cloud");
  if (sizing.flute_count < 1 || !(sizing.block_length > 0.0) || !(sizing.patch_frames > 0.0) ||
      !(sizing.patch_samples > 0.0)) {
    throw ConfigError(kModule, "grid sizing parameters must be positive");
  }
  double x_lo = cloud.points.front().x, x_hi = x_lo, y_lo = cloud.points.front().y, y_hi = y_lo;
  std::vector<double> gaps;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
    if (i > 0 && cloud.points[i - 1].frame == p.frame && p.x > cloud.points[i - 1].x) {
      gaps.push_back(p.x - cloud.points[i - 1].x);
    }
  }
  double dx = 1.0;
  if (!gaps.empty()) {
    auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
    std::nth_element(gaps.begin(), mid, gaps.end());
    dx = *mid;
  }
  const double dy = 2.0 * std::numbers::pi * meta.gamma / meta.frame_count;
  const double block_w = 2.0 * std::numbers::pi * meta.gamma / (2.0 * sizing.flute_count);
  auto count = [](double v) { return std::max(1, static_cast<int>(std::lround(v))); };

  GridShape g;
  g.blocks_y = count((y_hi - y_lo) / block_w);
  g.blocks_x = count((x_hi - x_lo) / sizing.block_length);
  g.patches_y = count((y_hi - y_lo) / g.blocks_y / (sizing.patch_frames * dy));
  g.patches_x = count((x_hi - x_lo) / g.blocks_x / (sizing.patch_samples * dx));
  return g;
}

double patch_mode(std::span<const double> depths, double bin_width) {
  if (!(bin_width > 0.0)) throw ConfigError(kModule, "histogram bin width must be positive");
  if (depths.empty()) return std::numeric_limits<double>::quiet_NaN();

  std::vector<long long> bins(depths.size());
  for (std::size_t i = 0; i < depths.size(); ++i) {
    bins[i] = static_cast<long long>(std::floor(depths[i] / bin_width + 0.5));
  }
  std::sort(bins.begin(), bins.end());
  long long best = bins.front();
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < bins.size();) {
    std::size_t j = i;
    while (j < bins.size() && bins[j] == bins[i]) ++j;
    if (j - i > best_count) {  // strict: ties keep the lower bin
      best_count = j - i;
      best = bins[i];
    }
    i = j;
  }
  return static_cast<double>(best) * bin_width;
}

std::vector<Label> classify_features(const EmResult& fit) {
  const std::size_t k_count = fit.model.size();
  const std::size_t n = k_count ? fit.responsibilities.size() / k_count : 0;
  std::vector<Label> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = component_label(fit.model, &fit.responsibilities[i * k_count]);
  return out;
}

std::vector<Label> labels_from_patches(const BlockGrid& grid, std::span<const Label> patch_labels) {
  std::vector<Label> out(grid.point_count(), Label::unlabeled);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = patch_labels[grid.patch_of_point(i)];
  return out;
}

SegmentationResult segment(const UnrolledCloud& cloud, const SegmentationOptions& options) {
  if (!(options.min_separation >= 0.0)) throw ConfigError(kModule, "min_separation must be >= 0");
  if (!(options.min_bimodality >= 0.0)) throw ConfigError(kModule, "min_bimodality must be >= 0");
  SegmentationResult r;
  r.grid = build_grid(cloud, options.grid);
  const auto& grid = r.grid;

  // Patch features.
  r.patch_modes.assign(grid.patch_count(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> depths;
  std::vector<double> all_modes;
  all_modes.reserve(grid.patch_count());
  for (std::size_t p = 0; p < grid.patch_count(); ++p) {
    const auto m = grid.members(p);
    if (m.empty()) {
      ++r.skipped_patches;
      continue;
    }
    depths.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) depths[i] = cloud.points[m[i]].z;
    r.patch_modes[p] = patch_mode(depths, options.bin_width);
    all_modes.push_back(r.patch_modes[p]);
  }

  // Cloud-level reference model for blocks that hold a single surface.
  r.patch_labels.assign(grid.patch_count(), Label::unlabeled);
  try {
    r.reference = fit_compressed(compress(all_modes), all_modes, options.em).model;
    r.homogeneous_cloud = separation(r.reference) < options.min_separation;
  } catch (const DegenerateInputError&) {
    r.homogeneous_cloud = true;
  } catch (const ConfigError&) {
    r.homogeneous_cloud = true;  // fewer than two nonempty patches
  }
  if (r.homogeneous_cloud) {
    for (std::size_t p = 0; p < grid.patch_count(); ++p) {
      if (!std::isnan(r.patch_modes[p])) r.patch_labels[p] = Label::blade_back;
    }
    r.blocks.resize(grid.block_count());
    r.point_labels = labels_from_patches(grid, r.patch_labels);
    return r;
  }

  const std::size_t ppb = grid.patches_per_block();
  r.blocks.resize(grid.block_count());
  std::vector<double> features;
  std::vector<std::size_t> feature_patch;
  for (std::size_t b = 0; b < grid.block_count(); ++b) {
    features.clear();
    feature_patch.clear();
    for (std::size_t local = 0; local < ppb; ++local) {
      const std::size_t p = b * ppb + local;
      if (std::isnan(r.patch_modes[p])) continue;
      features.push_back(r.patch_modes[p]);
      feature_patch.push_back(p);
    }
    auto& fit = r.blocks[b];
    fit.features = features.size();
    if (features.empty()) continue;

    const auto [lo, hi] = std::minmax_element(features.begin(), features.end());
    fit.homogeneous = features.size() < 2 || (*hi - *lo) < options.min_separation;
    if (!fit.homogeneous) {
      const auto packed = compress(features);
      const auto em = fit_compressed(packed, features, options.em);
      fit.model = em.model;
      fit.converged = em.converged;
      fit.monotone = em.monotone;
      fit.iterations = em.iterations;
      fit.log_likelihood = em.log_likelihood;
      r.converged = r.converged && em.converged;
      r.iterations = std::max(r.iterations, em.iterations);
      r.log_likelihood += em.log_likelihood;
      if (separation(em.model) < options.min_separation || bimodality(em.model) < options.min_bimodality) {
        fit.homogeneous = true;
      } else {
        const auto labels = classify_features(em);
        for (std::size_t i = 0; i < features.size(); ++i) r.patch_labels[feature_patch[i]] = labels[packed.slot[i]];
      }
    }
  }

  // Homogeneous blocks borrow the models of the physically nearest fitted
  // blocks; their averaged blade-back posterior decides each patch.
  const auto& shape = grid.shape();
  const double bw = (grid.x_max() - grid.x_min()) / shape.blocks_x;
  const double bh = (grid.y_max() - grid.y_min()) / shape.blocks_y;
  std::vector<std::size_t> fitted;
  for (std::size_t b = 0; b < r.blocks.size(); ++b) {
    if (!r.blocks[b].homogeneous && r.blocks[b].features > 0) fitted.push_back(b);
  }
  for (std::size_t b = 0; b < r.blocks.size(); ++b) {
    auto& fit = r.blocks[b];
    if (!fit.homogeneous || fit.features == 0) continue;
    const double bx = static_cast<double>(b % shape.blocks_x);
    const double by = static_cast<double>(b / shape.blocks_x);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t f : fitted) {
      const double dx = (static_cast<double>(f % shape.blocks_x) - bx) * bw;
      const double dy = (static_cast<double>(f / shape.blocks_x) - by) * bh;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best * (1.0 - 1e-12)) {
        best = d2;
        fit.donors.assign(1, f);
      } else if (d2 <= best * (1.0 + 1e-12)) {
        fit.donors.push_back(f);
      }
    }
    for (std::size_t local = 0; local < ppb; ++local) {
      const std::size_t p = b * ppb + local;
      const double z = r.patch_modes[p];
      if (std::isnan(z)) continue;
      if (fit.donors.empty()) {
        r.patch_labels[p] = label_with(r.reference, z);
        continue;
      }
      double fg = 0.0;
      for (std::size_t d : fit.donors) {
        const auto& m = r.blocks[d].model;
        fg += posterior(m, z)[m.foreground()];
      }
      r.patch_labels[p] = fg / static_cast<double>(fit.donors.size()) >= 0.5 ? Label::blade_back : Label::background;
    }
  }
  r.point_labels = labels_from_patches(grid, r.patch_labels);
  return r;
}

SegmentationResult classical_gmm_segment(const UnrolledCloud& cloud, const EmOptions& em) {
  if (cloud.points.empty()) throw ConfigError(kModule, "cannot segment an empty cloud");
  std::vector<double> z(cloud.points.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = cloud.points[i].z;
  const auto fit = em_fit(z, init_gmm(z), em);
  SegmentationResult r;
  r.point_labels = classify_features(fit);
  r.reference = fit.model;
  r.converged = fit.converged;
  r.iterations = fit.iterations;
  r.log_likelihood = fit.log_likelihood;
  BlockFit b;
  b.features = z.size();
  b.converged = fit.converged;
  b.monotone = fit.monotone;
  b.iterations = fit.iterations;
  b.log_likelihood = fit.log_likelihood;
  b.model = fit.model;
  r.blocks.push_back(std::move(b));
  return r;
}

}  // namespace drillcoax

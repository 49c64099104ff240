#pragma once

// Blade-back extraction on the unrolled cloud.
//
// The cloud's (x'', y'') bounding box is tiled into blocks, each block into
// patches. Every patch is summarised by the mode of its depth histogram; a
// two-component mixture is fitted to the patch modes of each block and every
// point inherits the label of its patch. The component with the smaller mean
// depth (nearest the sensor) is the blade back.

#include <cstdint>
#include <span>
#include <vector>

#include "drillcoax/gmm.hpp"
#include "drillcoax/scan_model.hpp"

namespace drillcoax {

struct GridShape {
  int blocks_x = 1;   // blocks along x'' (turntable axis)
  int blocks_y = 1;   // blocks along y'' (unrolled rotation)
  int patches_x = 1;  // patches per block along x''
  int patches_y = 1;  // patches per block along y''
};

/// Uniform two-level partition of a cloud's (x, y) bounding box. Patch ids are
/// block-major: id = block * patches_per_block() + local, with
/// block = by * blocks_x + bx and local = py * patches_x + px.
class BlockGrid {
 public:
  BlockGrid() = default;

  const GridShape& shape() const { return shape_; }
  std::size_t block_count() const { return static_cast<std::size_t>(shape_.blocks_x) * shape_.blocks_y; }
  std::size_t patches_per_block() const { return static_cast<std::size_t>(shape_.patches_x) * shape_.patches_y; }
  std::size_t patch_count() const { return block_count() * patches_per_block(); }
  std::size_t block_of_patch(std::size_t patch) const { return patch / patches_per_block(); }

  std::span<const std::uint32_t> members(std::size_t patch) const {
    return {members_.data() + offsets_[patch], offsets_[patch + 1] - offsets_[patch]};
  }
  std::uint32_t patch_of_point(std::size_t point) const { return point_patch_[point]; }
  std::size_t point_count() const { return point_patch_.size(); }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }

 private:
  friend BlockGrid build_grid(const UnrolledCloud& cloud, const GridShape& shape);

  GridShape shape_;
  double x_min_ = 0.0, x_max_ = 0.0, y_min_ = 0.0, y_max_ = 0.0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> members_;
  std::vector<std::uint32_t> point_patch_;
};

/// Throws ConfigError for empty clouds or counts < 1, DegenerateInputError
/// when the bounding box has zero extent along x or y.
BlockGrid build_grid(const UnrolledCloud& cloud, const GridShape& shape);

struct GridSizing {
  int flute_count = 2;
  double block_length = 5.0;  // mm along x''
  double patch_frames = 3.0;  // frames per patch along y''
  double patch_samples = 2.0; // sensor samples per patch along x''
};

/// Grid sized from physical dimensions: blocks one blade back plus lip wide
/// along y'' (2 pi gamma / (2 flute_count)) and about `block_length` long
/// along x''; patches of about patch_frames x patch_samples samples. The x''
/// sample spacing is the median spacing within frames.
GridShape default_grid(const UnrolledCloud& cloud, const ScanMeta& meta, const GridSizing& sizing);

/// Histogram mode of a patch. Bins are centred on integer multiples of
/// `bin_width`; the centre of the fullest bin is returned, ties going to the
/// lowest bin. Returns NaN for an empty patch. Throws ConfigError when
/// bin_width <= 0.
double patch_mode(std::span<const double> depths, double bin_width);

/// Labels features by their most probable component. The component with the
/// smallest mean is blade_back; a tie goes to blade_back.
std::vector<Label> classify_features(const EmResult& fit);

/// Broadcasts patch labels to member points.
std::vector<Label> labels_from_patches(const BlockGrid& grid, std::span<const Label> patch_labels);

struct SegmentationOptions {
  GridShape grid;
  double bin_width = 0.039;
  EmOptions em;
  /// Depth gap below which two fitted components are treated as a single
  /// surface. Blocks whose patch modes span less than this (or whose fitted
  /// means end up closer than this) are homogeneous: they are labelled with
  /// the models of the nearest fitted blocks, or with the cloud-level model
  /// when no block could be fitted.
  double min_separation = 0.1;
  /// A fitted pair whose mean gap is below this many pooled sigmas
  /// (|mu1 - mu0| sqrt(2 / (s0^2 + s1^2))) also marks the block homogeneous.
  /// A single tilted surface splits into two overlapping components that pass
  /// the depth test but score near 2.5 here.
  double min_bimodality = 3.0;
};

struct BlockFit {
  std::size_t features = 0;
  bool homogeneous = false;
  std::vector<std::size_t> donors;  // blocks whose models labelled a homogeneous block
  bool converged = false;
  bool monotone = true;
  int iterations = 0;
  double log_likelihood = 0.0;
  GmmModel model;
};

struct SegmentationResult {
  std::vector<Label> point_labels;
  std::vector<Label> patch_labels;   // unlabeled for empty patches
  std::vector<double> patch_modes;   // NaN for empty patches
  std::vector<BlockFit> blocks;
  GmmModel reference;                // cloud-level model over all patch modes
  bool homogeneous_cloud = false;
  std::size_t skipped_patches = 0;
  bool converged = true;             // every fitted block converged
  int iterations = 0;                // largest per-block iteration count
  double log_likelihood = 0.0;       // sum over fitted blocks
  BlockGrid grid;
};

/// Spatially regularised segmentation of an unrolled cloud.
SegmentationResult segment(const UnrolledCloud& cloud, const SegmentationOptions& options);

/// Per-point classical mixture without spatial division: one two-component
/// model over every point depth, initialised from the raw depth range.
SegmentationResult classical_gmm_segment(const UnrolledCloud& cloud, const EmOptions& em);

}  // namespace drillcoax

#include "drillcoax/pipeline.hpp"

#include <chrono>

#include "drillcoax/error.hpp"

namespace drillcoax {

ScanMeta effective_meta(const ScanMeta& meta, const PipelineConfig& config) {
  ScanMeta m = meta;
  if (config.axis_distance > 0.0) m.axis_distance = config.axis_distance;
  if (config.gamma > 0.0) m.gamma = config.gamma;
  m.validate();
  return m;
}

SegmentedScan segment_scan(const ScanSet& scan, const PipelineConfig& config) {
  SegmentedScan out;
  out.meta = effective_meta(scan.meta, config);
  const ScanSet filtered = depth_range_filter(scan, config.z_near, config.z_far);
  out.frames = filtered.frames;

  const UnrolledCloud unrolled = unroll(filtered.frames, out.meta);
  if (unrolled.points.empty()) throw DataDeficiencyError("scan-model", "no samples inside the depth range");

  auto options = config.segmentation_options();
  const GridShape sized = default_grid(unrolled, out.meta, config.sizing);
  if (options.grid.blocks_x == 0) options.grid.blocks_x = sized.blocks_x;
  if (options.grid.blocks_y == 0) options.grid.blocks_y = sized.blocks_y;
  if (options.grid.patches_x == 0) options.grid.patches_x = sized.patches_x;
  if (options.grid.patches_y == 0) options.grid.patches_y = sized.patches_y;
  out.segmentation = segment(unrolled, options);

  ScanSet transformed{out.meta, filtered.frames};
  out.cloud = to_measurement_cloud(transformed);
  for (std::size_t i = 0; i < out.cloud.points.size(); ++i) out.cloud.points[i].label = out.segmentation.point_labels[i];

  if (config.sor_enabled) {
    std::vector<Point3> pts;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < out.cloud.points.size(); ++i) {
      const auto& p = out.cloud.points[i];
      if (p.label != Label::blade_back) continue;
      pts.push_back({p.x, p.y, p.z});
      owner.push_back(i);
    }
    out.sor = sor_filter(pts, config.sor);
    for (std::size_t k = 0; k < owner.size(); ++k) {
      if (!out.sor.keep[k]) out.cloud.points[owner[k]].label = Label::outlier;
    }
  }
  return out;
}

CoaxialityReport measure(const ScanSet& scan, const PipelineConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();

  CoaxialityReport r;
  r.input_points = scan.point_count();
  const SegmentedScan seg = segment_scan(scan, config);
  r.axis_distance = seg.meta.axis_distance;
  r.filtered_points = seg.cloud.points.size();
  r.grid = seg.segmentation.grid.shape();
  r.segmentation_converged = seg.segmentation.converged;
  r.segmentation_iterations = seg.segmentation.iterations;
  r.sor_removed = seg.sor.removed;
  if (seg.sor.skipped) r.warnings.push_back(seg.sor.warning);
  if (!seg.segmentation.converged) r.warnings.push_back("EM reached the iteration limit in at least one block");
  if (seg.segmentation.homogeneous_cloud) r.warnings.push_back("depth distribution is homogeneous; every point kept");
  for (const auto& p : seg.cloud.points) {
    if (p.label == Label::blade_back) ++r.blade_back_points;
  }

  r.axis = reconstruct_axis(seg.cloud, seg.meta, config.axis_options());
  r.coaxiality = r.axis.coaxiality;
  r.benchmark = r.axis.benchmark;
  r.theta_deg = config.theta_deg;
  r.delta_z_s = config.delta_z_s;

  r.uncertainty = budget(config.delta_z, config.delta_c, config.nominal_radius, config.part_length,
                         config.part_diameter);
  r.within_spec = within_spec(r.uncertainty, config.max_ratio);
  r.min_aspect_for_ratio = min_aspect_for_ratio(r.uncertainty, config.max_ratio);
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

CalibrationResult calibrate_scan(const ScanSet& scan, const PipelineConfig& config) {
  config.validate();
  return calibrate(scan, config.calibration);
}

}  // namespace drillcoax

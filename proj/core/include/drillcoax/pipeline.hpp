#pragma once

// End-to-end measurement: depth filter, unroll, blade-back segmentation, SOR,
// axis reconstruction and the uncertainty budget.

#include <string>
#include <vector>

#include "drillcoax/axis.hpp"
#include "drillcoax/calibration.hpp"
#include "drillcoax/config.hpp"
#include "drillcoax/scan_model.hpp"
#include "drillcoax/segmentation.hpp"
#include "drillcoax/uncertainty.hpp"

namespace drillcoax {

struct CoaxialityReport {
  double coaxiality = 0.0;
  Point2 benchmark{0.0, 0.0};
  double theta_deg = 0.0;
  double delta_z_s = 0.0;
  double axis_distance = 0.0;  // D actually used
  UncertaintyBudget uncertainty;
  bool within_spec = false;
  double min_aspect_for_ratio = 0.0;
  double runtime_s = 0.0;

  std::size_t input_points = 0;
  std::size_t filtered_points = 0;  // after the depth filter
  std::size_t blade_back_points = 0;
  std::size_t sor_removed = 0;
  GridShape grid;
  bool segmentation_converged = true;
  int segmentation_iterations = 0;
  std::vector<std::string> warnings;

  AxisResult axis;
};

struct SegmentedScan {
  ScanMeta meta;                 // with D and gamma overrides applied
  MeasurementCloud cloud;        // labels from segmentation (and SOR)
  SegmentationResult segmentation;
  SorResult sor;
  std::vector<SensorFrame> frames;  // depth-filtered frames, cloud order
};

/// Meta with configuration overrides (D, gamma) applied.
ScanMeta effective_meta(const ScanMeta& meta, const PipelineConfig& config);

/// Filter, unroll, segment and (optionally) SOR. Points removed by SOR keep
/// their place in the cloud with label `outlier`.
SegmentedScan segment_scan(const ScanSet& scan, const PipelineConfig& config);

/// Full measurement. Errors from any module propagate with their module name.
CoaxialityReport measure(const ScanSet& scan, const PipelineConfig& config);

/// Calibration with the options in `config`.
CalibrationResult calibrate_scan(const ScanSet& scan, const PipelineConfig& config);

}  // namespace drillcoax

#pragma once

// JSON and CSV emission for reports, calibration results, mixture models and
// simulator ground truth. Plot data is CSV only; rendering is left to other
// tools.

#include <filesystem>
#include <string>

#include "drillcoax/calibration.hpp"
#include "drillcoax/pipeline.hpp"
#include "drillcoax/segmentation.hpp"
#include "drillcoax/simulator.hpp"

namespace drillcoax {

/// Keys: coaxiality_mm, benchmark_center, sections, shank_sections, xsm,
/// peak_x, located_x, theta_deg, delta_z_s, axis_distance_D, epsilon, uncertainty,
/// segmentation, warnings, runtime_s. The key set never varies.
std::string report_json(const CoaxialityReport& report);

/// Keys: D, i_star, delta_z, spacing_residual, pass_rule_I, pass_rule_II,
/// pass_rule_III, pass, boundary_warning, other_local_minima.
std::string calibration_json(const CalibrationResult& result);

/// Reference model under weights, means, sigmas, iterations, loglik plus one
/// entry per block under `blocks`.
std::string model_json(const SegmentationResult& result);

/// Keys: true_coaxiality, apex_x, phi, benchmark_center.
std::string truth_json(const GroundTruth& truth);

/// Writes deviation.csv (x, absv, absh, squabs), profiles.csv (slot,
/// angle_deg, kind, x, z), sections.csv (kind, x0, y, z) and section_fits.csv
/// (kind, x, center_y, center_z, radius, residual, distance, points) into
/// `dir`, creating it if needed.
void write_plot_csvs(const std::filesystem::path& dir, const CoaxialityReport& report);

}  // namespace drillcoax

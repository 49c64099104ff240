#pragma once

// System calibration from stepped-shaft calibration-block scans.
//
// Rule I   the block is completely visible (four markers inside the X range)
// Rule II  the block outline is a straight line: markers evenly spaced along x
//          and |z_D - z_A| <= delta_z_threshold
// Rule III the frame minimising z_B + z_C is a strict local minimum
//
// The system parameter is then D = (z_B(i*) + z_C(i*)) / 2.

#include <optional>
#include <span>
#include <vector>

#include "drillcoax/scan_model.hpp"

namespace drillcoax {

/// Markers P_A..P_D of one frame. P_B and P_C are the ladder endpoints.
struct CalibrationMarkers {
  SensorPoint a, b, c, d;
};

struct RuleIICheck {
  bool pass = false;
  double delta_z = 0.0;          // |z_d - z_a|
  double spacing_residual = 0.0; // worst deviation from even spacing
};

struct ClosestFrame {
  std::size_t index = 0;         // position in the sequences (i*)
  bool at_boundary = false;      // minimum sits on the first or last frame
  bool strict_minimum = false;   // both strict inequalities hold
  std::vector<std::size_t> other_local_minima;
};

struct CalibrationResult {
  double D = 0.0;
  int best_frame = 0;            // frame index of i*
  double delta_z = 0.0;
  double spacing_residual = 0.0;
  bool pass_rule_I = false;
  bool pass_rule_II = false;
  bool pass_rule_III = false;
  bool boundary_warning = false;
  std::vector<int> other_local_minima;

  bool pass() const { return pass_rule_I && pass_rule_II && pass_rule_III; }
};

struct CalibrationOptions {
  double delta_z_threshold = 0.039;  // 3 x Z resolution of the reference sensor
  double spacing_tolerance = 0.1;
  double jump_threshold = 1.5;       // half the 3 mm ladder height
  double x_min = -1e300;             // sensor X range for Rule I
  double x_max = 1e300;
};

/// Rule II on one set of markers. Throws DegenerateInputError when two
/// markers share an x coordinate.
RuleIICheck check_rule_II(const CalibrationMarkers& markers, double delta_z_threshold, double spacing_tolerance);

/// Rule I as a data check: markers ordered along x and inside [x_min, x_max].
bool check_rule_I(const CalibrationMarkers& markers, double x_min, double x_max);

/// Index minimising z_B + z_C (ties: smallest index). Throws ConfigError on
/// empty or mismatched sequences.
ClosestFrame locate_closest_frame(std::span<const double> z_b, std::span<const double> z_c);

/// D = (z_B(i*) + z_C(i*)) / 2 plus the Rule III verdict. Rule I/II fields are
/// left at their defaults.
CalibrationResult solve_D(std::span<const double> z_b, std::span<const double> z_c);

/// Locates the ladder in one profile from its two largest depth jumps and
/// derives evenly spaced outer markers. Returns nullopt when fewer than two
/// jumps exceed `jump_threshold`.
std::optional<CalibrationMarkers> extract_markers(const SensorFrame& frame, double jump_threshold);

/// Full calibration on a block scan: markers per frame, Rule III over the
/// frames where the ladder was found, Rules I and II on the best frame.
/// Throws DataDeficiencyError when no frame shows the ladder.
CalibrationResult calibrate(const ScanSet& scan, const CalibrationOptions& options);

}  // namespace drillcoax

#pragma once

// Synthetic line-structured-light scans with known ground truth.
//
// Drill model: a cylindrical shank on [0, shank_length) followed by a fluted
// working part. Each flute period of the working cross section is, in order
// of local angle: blade back (radius R), a short ramp down to the recessed
// blade lip (R - lip_height), then a V-shaped groove down to R - groove_depth
// (optionally with a flat bottom there) rising back to R. The profile twists
// along x with the helix pitch. The working part bows away from the turntable
// axis as
//   b(x) = a (1 - ((x - x_apex) / (x_apex - x_s))^2),  x_s = shank_length
// in the direction (sin phi, cos phi) of the (y', z') measurement plane.
//
// Frame i looks along -u_i, u_i = (sin theta_i, cos theta_i), from distance D
// to the turntable axis; the laser plane contains the axis.

#include <cstdint>
#include <vector>

#include "drillcoax/circle_fit.hpp"
#include "drillcoax/scan_model.hpp"

namespace drillcoax {

struct BendModel {
  double amplitude = 0.0;  // a, mm; true coaxiality is 2a
  double apex_x = 70.0;    // mm along x
  double phi_deg = 0.0;    // bend plane angle
};

struct DrillSpec {
  double shank_length = 40.0;
  double shank_diameter = 10.0;
  double working_length = 60.0;
  double working_diameter = 10.0;
  int flute_count = 2;
  double helix_pitch = 54.41;     // mm per revolution (30 deg helix at 10 mm)
  double blade_back_deg = 60.0;
  double blade_lip_deg = 30.0;    // includes the ramp
  double lip_ramp_deg = 3.0;
  double lip_height = 0.5;        // lip recess below R
  double groove_depth = 3.0;
  double groove_flat_deg = 0.0;   // 0: pure V, both walls beyond the incidence limit
  BendModel bend;

  double radius() const { return 0.5 * working_diameter; }
  double shank_radius() const { return 0.5 * shank_diameter; }
  double groove_deg() const { return 360.0 / flute_count - blade_back_deg - blade_lip_deg; }
  double tip_x() const { return shank_length + working_length; }

  /// Throws ConfigError on invalid geometry.
  void validate() const;
};

struct OcclusionModel {
  double incidence_limit_deg = 30.0;  // max angle between ray and surface normal
  double dof_near = 106.5;            // depth of field, mm
  double dof_far = 200.0;
  double fov_near = 80.0;             // field-of-view width at dof_near / dof_far
  double fov_far = 153.0;
  double fov_center_x = 50.0;

  void validate() const;
  double fov_width(double depth) const;
};

struct ScanOptions {
  double x_min = -5.0;           // first / last sample position along x
  double x_max = 105.0;
  double noise_sigma = 0.0;      // Gaussian depth noise, mm
  std::uint64_t seed = 0;
  double outlier_fraction = 0.0; // fraction of samples pushed off the surface
  double outlier_min = 0.5;      // outlier depth offset magnitude range, mm
  double outlier_max = 3.0;
};

struct GroundTruth {
  std::vector<Label> labels;          // surface class of each emitted sample, scan order
  std::vector<std::uint8_t> outlier;  // 1 for injected outliers, scan order
  double true_coaxiality = 0.0;
  double apex_x = 0.0;
  double phi_deg = 0.0;
  Point2 benchmark{0.0, 0.0};         // shank axis in the (y', z') plane
};

struct SimulatedScan {
  ScanSet scan;
  GroundTruth truth;
};

/// Signed bend b(x); zero on the shank.
double bend_offset(const DrillSpec& spec, double x);

/// Axis centre (y', z') at x.
Point2 axis_center(const DrillSpec& spec, double x);

/// Largest |b(x)| over the working part, times two.
double true_coaxiality(const DrillSpec& spec);

/// Surface radius about the local axis centre and its class at local polar
/// angle `psi` (radians, measured from +z' toward +y') and axial position x.
struct SurfaceSample {
  double radius = 0.0;
  double slope = 0.0;  // d radius / d psi
  Label label = Label::blade_back;
};
SurfaceSample drill_surface(const DrillSpec& spec, double x, double psi);

/// Scans a drill. meta.gamma <= 0 is replaced by the drill radius. Throws
/// ConfigError for invalid inputs and SimulationError when the drill leaves
/// the field of view.
SimulatedScan scan_drill(const DrillSpec& spec, ScanMeta meta, const OcclusionModel& occlusion,
                         const ScanOptions& options);

struct CalibrationBlockSpec {
  double l_a = 120.0;  // total length
  double l_b = 70.0;   // first thin section
  double l_c = 10.0;   // collar (the ladder)
  double l_d = 40.0;   // second thin section
  double d_a = 8.0;    // thin diameter
  double d_b = 14.0;   // collar diameter
  double roll_slope = 0.0;  // depth change per mm along x (misalignment)

  void validate() const;
};

struct CalibrationScanOptions {
  double axis_distance = 150.0;  // true D
  int frames = 41;
  int best_frame = 20;           // frame where the sensor is closest
  double lateral_step = 0.5;     // sensor offset per frame, mm
  int points_per_frame = 1350;
  double x_min = -5.0;
  double x_max = 125.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct SimulatedCalibration {
  ScanSet scan;
  double true_D = 0.0;
  int true_best_frame = 0;
};

/// Stepped-shaft block mounted with the collar's near generatrix on the
/// turntable axis. The frames sweep the sensor laterally by
/// e_i = (i - best_frame) * lateral_step, so the depth of a section of radius
/// r is D + r_collar - sqrt(r^2 - e_i^2) and the collar depth equals D
/// exactly at the best frame.
SimulatedCalibration scan_calibration_block(const CalibrationBlockSpec& block, const CalibrationScanOptions& options);

/// Per-frame generator seed derived from (seed, frame).
std::uint64_t frame_seed(std::uint64_t seed, int frame);

}  // namespace drillcoax

#pragma once

// Axis-deviation analysis by orthogonal synthesis.
//
// Four axial profiles are taken from the blade-back points at theta,
// theta + 90, theta + 180 and theta + 270 degrees. Opposite profiles are
// differenced (ABSV: theta vs theta + 180, ABSH: theta + 90 vs theta + 270)
// and combined as SquABS = sqrt(ABSV^2 + ABSH^2). Cross sections are cut where
// SquABS is within delta_z_s of its maximum, circles are fitted there and on
// the shank, and the coaxiality is twice the largest centre offset from the
// shank benchmark.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "drillcoax/circle_fit.hpp"
#include "drillcoax/scan_model.hpp"
#include "drillcoax/spline.hpp"

namespace drillcoax {

struct ProfileSample {
  double x = 0.0;
  double z = 0.0;  // sensor depth
};

struct AxialProfile {
  int slot = 0;                         // k in theta + 90 k
  double angle_deg = 0.0;
  int window_frames = 0;                // half-width actually used
  std::vector<ProfileSample> samples;   // raw, ascending x
  std::vector<ProfileSample> knots;     // binned, outliers rejected
  std::size_t rejected = 0;             // knots dropped as outliers
  QuadraticSpline spline;
};

struct ProfileOptions {
  double theta_deg = 0.0;
  int window_frames = 2;       // frames each side of the target angle
  double bin_width = 1.0;      // axial averaging bin in mm; 0 keeps raw samples
  int min_bin_samples = 3;
  // Knots further than outlier_tolerance from the line through their
  // neighbours within outlier_window mm are dropped; stray lip points at
  // blade-back edges otherwise bend the spline across the flute gaps.
  double outlier_window = 5.0;
  double outlier_tolerance = 0.1;   // 0 disables
};

/// Blade-back samples whose frame angle lies within the window around
/// `angle_deg`, as (x, depth) with depth = D - sqrt(y^2 + z^2).
std::vector<ProfileSample> collect_profile(const MeasurementCloud& cloud, const ScanMeta& meta, double angle_deg,
                                           int window_frames);

/// One knot per bin of `bin_width` anchored at x = 0: mean x, median depth.
/// Bins holding fewer than `min_samples` samples are dropped; bin_width <= 0
/// returns the samples unchanged.
std::vector<ProfileSample> bin_profile(std::span<const ProfileSample> samples, double bin_width, int min_samples);

/// Repeatedly drops the knot with the largest residual against a line fitted
/// to its neighbours, while that residual exceeds `tolerance`. Neighbours are
/// the knots within `window`; if fewer than four, the two nearest knots on
/// each side by index.
/// Returns the number removed.
std::size_t reject_outlier_knots(std::vector<ProfileSample>& knots, double window, double tolerance);

/// The four profiles. A window with fewer than three distinct x is retried at
/// twice the width; if that also fails, DataDeficiencyError names the angle.
std::array<AxialProfile, 4> extract_profiles(const MeasurementCloud& cloud, const ScanMeta& meta,
                                             const ProfileOptions& options);

enum class DeviationKind { absv, absh, squabs };

const char* to_string(DeviationKind kind);

struct DeviationProfile {
  DeviationKind kind = DeviationKind::absv;
  std::vector<double> x;
  std::vector<double> z;
};

/// lo, lo + step, ... up to hi (inclusive within 1e-9 step). Throws
/// ConfigError for step <= 0 and RangeError when hi < lo.
std::vector<double> uniform_grid(double lo, double hi, double step);

/// |a(x) - b(x)| on `grid`. Throws RangeError if any grid point lies outside
/// either spline.
DeviationProfile difference_profiles(const QuadraticSpline& a, const QuadraticSpline& b,
                                     std::span<const double> grid, DeviationKind kind);

/// sqrt(absh^2 + absv^2) pointwise. Throws ConfigError if the grids differ.
DeviationProfile synthesize(const DeviationProfile& absv, const DeviationProfile& absh);

/// Every grid x with z >= max z - delta_z_s, ascending. Throws
/// DataDeficiencyError on an empty profile and ConfigError for delta_z_s < 0.
std::vector<double> locate_max_deviation(const DeviationProfile& squabs, double delta_z_s);

/// Blade-back points of `cloud` with |x - x0| <= half_width, as (y, z).
std::vector<Point2> section_points(const MeasurementCloud& cloud, double x0, double half_width);

struct CrossSection {
  double x = 0.0;
  std::vector<Point2> points;
  CircleFit fit;
  double distance = 0.0;  // centre distance to the benchmark
};

struct AxisOptions {
  ProfileOptions profile;
  double delta_z_s = 0.01;
  double grid_step = 0.0;           // 0: median knot spacing
  double section_half_width = 0.0;  // 0: half the grid step
  double shank_min = 5.0;
  double shank_max = 35.0;
  int shank_sections = 5;
};

struct AxisResult {
  std::array<AxialProfile, 4> profiles;
  double grid_step = 0.0;
  DeviationProfile absv, absh, squabs;
  std::vector<double> xsm;
  double peak_x = 0.0;              // first grid x attaining max SquABS
  double located_x = 0.0;           // centre of the XSM band; the reported position
  std::vector<CrossSection> sections;
  std::vector<CrossSection> shank;
  Point2 benchmark{0.0, 0.0};
  double coaxiality = 0.0;
};

/// Runs the whole analysis on a cloud whose blade-back points are labelled.
AxisResult reconstruct_axis(const MeasurementCloud& cloud, const ScanMeta& meta, const AxisOptions& options);

}  // namespace drillcoax

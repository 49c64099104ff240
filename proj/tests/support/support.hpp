#pragma once

// Shared fixtures and independent reference computations for the tests.
// Nothing here calls the library routine it is used to check.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "drillcoax/pipeline.hpp"
#include "drillcoax/simulator.hpp"

namespace drillcoax::testing {

struct DrillCase {
  double amplitude = 0.25;
  double phi_deg = 0.0;
  double apex_x = 70.0;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double outlier_fraction = 0.0;
};

/// Default drill, sensor and turntable with the case's bend and noise.
SimulatedScan simulate(const DrillCase& c);

/// Pipeline defaults with SOR switched off, so cloud order equals scan order.
PipelineConfig segmentation_only_config();

/// Fraction of points whose label equals the truth. Truth outliers are
/// skipped; a predicted outlier counts as wrong.
double point_accuracy(std::span<const Label> predicted, std::span<const Label> truth,
                      std::span<const std::uint8_t> truth_outlier = {});

/// Fraction of non-empty patches whose label equals the majority truth label
/// of their member points. Evenly split patches count as correct.
double patch_accuracy(const SegmentationResult& seg, std::span<const Label> truth);

// ---- reference computations -------------------------------------------------

/// Histogram mode by direct counting over every candidate bin index.
double mode_by_counting(std::span<const double> z, double bin_width);

/// Circle through three points (circumcircle).
std::array<double, 3> circumcircle(const std::array<double, 2>& a, const std::array<double, 2>& b,
                                   const std::array<double, 2>& c);

/// Mean distance to the k nearest other points, O(n^2).
std::vector<double> brute_force_knn_mean(std::span<const std::array<double, 3>> pts, int k);

/// Composite Simpson integral of f over [a, b] with n (even) intervals.
template <typename F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Sample mean and (n - 1) standard deviation.
std::array<double, 2> mean_std(std::span<const double> v);

}  // namespace drillcoax::testing

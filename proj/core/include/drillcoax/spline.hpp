#pragma once

// C1 piecewise-quadratic interpolation.
//
// Each knot interval [x_i, x_{i+1}] is split at its midpoint into two
// quadratic pieces that meet with matching value and slope. Knot slopes come
// from the parabola through each knot and its two neighbours, so data lying on
// a single quadratic is reproduced exactly.

#include <span>
#include <vector>

namespace drillcoax {

class QuadraticSpline {
 public:
  QuadraticSpline() = default;

  /// Builds the interpolant. Samples need not be sorted; samples sharing an x
  /// are averaged. Throws DataDeficiencyError with fewer than three distinct x
  /// and ConfigError on size mismatch or non-finite input.
  static QuadraticSpline fit(std::span<const double> x, std::span<const double> z);

  /// Throws RangeError outside [x_min(), x_max()].
  double operator()(double x) const;
  double derivative(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return z_; }
  const std::vector<double>& slopes() const { return d_; }

 private:
  std::size_t interval(double x) const;

  std::vector<double> x_, z_, d_;
  std::vector<double> mid_slope_;  // slope at each interval midpoint
};

}  // namespace drillcoax

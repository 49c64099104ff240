#pragma once

// Algebraic (Kasa) least-squares circle fit and the coaxiality value.

#include <array>
#include <span>
#include <vector>

namespace drillcoax {

using Point2 = std::array<double, 2>;  // (y, z) in a section plane

struct CircleFit {
  Point2 center{0.0, 0.0};
  double radius = 0.0;
  double residual = 0.0;  // rms radial error
  std::size_t points = 0;
};

/// Minimises sum (y^2 + z^2 + A y + B z + C)^2. Coordinates are centred on
/// their mean before solving. Throws DataDeficiencyError with fewer than three
/// points and DegenerateInputError for collinear points.
CircleFit fit_circle(std::span<const Point2> points);

/// Twice the largest distance from any centre to the benchmark. Throws
/// DataDeficiencyError when `centers` is empty.
double coaxiality(std::span<const Point2> centers, const Point2& benchmark);

}  // namespace drillcoax

#include "drillcoax/circle_fit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "axis-reconstruction";

}  // namespace

CircleFit fit_circle(std::span<const Point2> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < 3) throw DataDeficiencyError(kModule, "circle fit needs >= 3 points, got " + std::to_string(n));

  double my = 0.0, mz = 0.0;
  for (const auto& p : points) {
    my += p[0];
    mz += p[1];
  }
  my /= static_cast<double>(n);
  mz /= static_cast<double>(n);

  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = points[static_cast<std::size_t>(i)][0] - my;
    const double z = points[static_cast<std::size_t>(i)][1] - mz;
    a(i, 0) = y;
    a(i, 1) = z;
    a(i, 2) = 1.0;
    b(i) = -(y * y + z * z);
    scale = std::max(scale, std::hypot(y, z));
  }
  if (!(scale > 0.0)) throw DegenerateInputError(kModule, "circle fit points are coincident");

  // Scale y and z to unit spread so the rank test compares like columns.
  const Eigen::Vector3d unit(1.0 / scale, 1.0 / scale, 1.0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a * unit.asDiagonal());
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw DegenerateInputError(kModule, "circle fit points are collinear");
  const Eigen::Vector3d sol = unit.cwiseProduct(Eigen::Vector3d(qr.solve(b)));
  CircleFit fit;
  fit.center = {my - 0.5 * sol(0), mz - 0.5 * sol(1)};
  const double r2 = 0.25 * (sol(0) * sol(0) + sol(1) * sol(1)) - sol(2);
  if (!(r2 > 0.0)) throw DegenerateInputError(kModule, "circle fit produced a non-positive radius");
  fit.radius = std::sqrt(r2);
  double ss = 0.0;
  for (const auto& p : points) {
    const double e = std::hypot(p[0] - fit.center[0], p[1] - fit.center[1]) - fit.radius;
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.points = points.size();
  return fit;
}

double coaxiality(std::span<const Point2> centers, const Point2& benchmark) {
  if (centers.empty()) throw DataDeficiencyError(kModule, "coaxiality needs at least one section centre");
  double worst = 0.0;
  for (const auto& c : centers) worst = std::max(worst, std::hypot(c[0] - benchmark[0], c[1] - benchmark[1]));
  return 2.0 * worst;
}

}  // namespace drillcoax

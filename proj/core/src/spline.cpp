#include "drillcoax/spline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "axis-reconstruction";

}  // namespace

QuadraticSpline QuadraticSpline::fit(std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size()) throw ConfigError(kModule, "spline x and z sizes differ");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(z[i])) throw ConfigError(kModule, "spline samples must be finite");
  }
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  QuadraticSpline s;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < order.size() && x[order[j]] == x[order[i]]) sum += z[order[j++]];
    s.x_.push_back(x[order[i]]);
    s.z_.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  const std::size_t n = s.x_.size();
  if (n < 3) {
    throw DataDeficiencyError(kModule, "quadratic spline needs >= 3 distinct x, got " + std::to_string(n));
  }

  std::vector<double> h(n - 1), sec(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = s.x_[i + 1] - s.x_[i];
    sec[i] = (s.z_[i + 1] - s.z_[i]) / h[i];
  }
  s.d_.resize(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    s.d_[i] = (h[i] * sec[i - 1] + h[i - 1] * sec[i]) / (h[i - 1] + h[i]);
  }
  s.d_[0] = sec[0] - h[0] * (sec[1] - sec[0]) / (h[0] + h[1]);
  s.d_[n - 1] = sec[n - 2] + h[n - 2] * (sec[n - 2] - sec[n - 3]) / (h[n - 3] + h[n - 2]);

  // Midpoint slope from value continuity: the two half-interval pieces each
  // integrate the average of their end slopes over h/2.
  s.mid_slope_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    s.mid_slope_[i] = 2.0 * sec[i] - 0.5 * (s.d_[i] + s.d_[i + 1]);
  }
  return s;
}

std::size_t QuadraticSpline::interval(double x) const {
  if (x_.empty()) throw RangeError(kModule, "spline is empty");
  if (!(x >= x_.front() && x <= x_.back())) {
    throw RangeError(kModule, "spline evaluated at x = " + std::to_string(x) + " outside [" +
                                  std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");
  }
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto i = static_cast<std::size_t>(it - x_.begin());
  return std::min(i == 0 ? 0 : i - 1, x_.size() - 2);
}

double QuadraticSpline::operator()(double x) const {
  const std::size_t i = interval(x);
  const double half = 0.5 * (x_[i + 1] - x_[i]);
  const double dm = mid_slope_[i];
  const double t = x - x_[i];
  if (t <= half) {
    const double a = (dm - d_[i]) / (2.0 * half);
    return z_[i] + t * (d_[i] + a * t);
  }
  const double u = x - x_[i + 1];  // in [-half, 0]
  const double b = (d_[i + 1] - dm) / (2.0 * half);
  return z_[i + 1] + u * (d_[i + 1] + b * u);
}

double QuadraticSpline::derivative(double x) const {
  const std::size_t i = interval(x);
  const double half = 0.5 * (x_[i + 1] - x_[i]);
  const double dm = mid_slope_[i];
  const double t = x - x_[i];
  if (t <= half) return d_[i] + (dm - d_[i]) * t / half;
  const double u = x - x_[i + 1];
  return d_[i + 1] + (d_[i + 1] - dm) * u / half;
}

}  // namespace drillcoax

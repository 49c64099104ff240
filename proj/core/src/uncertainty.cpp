#include "drillcoax/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "uncertainty";
constexpr double kRunningAngleDeg = 0.001;

}  // namespace

UncertaintyBudget budget(double delta_z, double delta_c, double R, double L, double D_d) {
  if (!(delta_z >= 0.0) || !(delta_c >= 0.0)) throw ConfigError(kModule, "delta_z and delta_c must be >= 0");
  if (!(R > 0.0) || !(L > 0.0) || !(D_d > 0.0)) throw ConfigError(kModule, "R, L and D_d must be positive");
  UncertaintyBudget b;
  b.delta_z = delta_z;
  b.delta_c = delta_c;
  // 1 - cos(t) written as 2 sin^2(t/2) to keep digits at tiny angles.
  const double half = 0.5 * kRunningAngleDeg * std::numbers::pi / 180.0;
  b.delta_eta = R * 2.0 * std::sin(half) * std::sin(half);
  b.delta_D = delta_z + delta_c;
  b.delta_z_p = delta_z + delta_c;
  b.delta_R = b.delta_D + b.delta_z_p + b.delta_eta;
  b.aspect = L / D_d;
  b.C_s = 0.03 + 0.01 * b.aspect;
  b.epsilon = b.delta_R / b.C_s;
  return b;
}

bool within_spec(const UncertaintyBudget& b, double max_ratio) { return b.epsilon <= max_ratio; }

double min_aspect_for_ratio(const UncertaintyBudget& b, double max_ratio) {
  if (!(max_ratio > 0.0)) throw ConfigError(kModule, "max_ratio must be positive");
  return std::max(0.0, (b.delta_R / max_ratio - 0.03) / 0.01);
}

}  // namespace drillcoax

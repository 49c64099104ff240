#pragma once

// Measurement-uncertainty budget and tolerance-ratio check.
//
//   delta_eta = R (1 - cos 0.001 deg)
//   delta_D = delta_z_p = delta_z + delta_c
//   delta_R = delta_D + delta_z_p + delta_eta
//   C_s = 0.03 + 0.01 L / D_d
//   epsilon = delta_R / C_s

namespace drillcoax {

struct UncertaintyBudget {
  double delta_z = 0.0;    // sensor repeatability
  double delta_c = 0.0;    // turntable eccentricity
  double delta_eta = 0.0;  // running-angle term
  double delta_D = 0.0;
  double delta_z_p = 0.0;
  double delta_R = 0.0;
  double C_s = 0.0;        // tolerance range
  double epsilon = 0.0;
  double aspect = 0.0;     // L / D_d
};

/// Throws ConfigError when delta_z or delta_c is negative or when R, L or
/// D_d is not positive.
UncertaintyBudget budget(double delta_z, double delta_c, double R, double L, double D_d);

/// epsilon <= max_ratio (inclusive).
bool within_spec(const UncertaintyBudget& b, double max_ratio = 0.20);

/// Smallest L / D_d for which epsilon <= max_ratio at this delta_R; zero when
/// every aspect ratio qualifies.
double min_aspect_for_ratio(const UncertaintyBudget& b, double max_ratio = 0.20);

}  // namespace drillcoax

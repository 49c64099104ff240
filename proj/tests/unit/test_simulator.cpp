#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "drillcoax/error.hpp"
#include "drillcoax/simulator.hpp"

using namespace drillcoax;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

ScanMeta small_meta() { return ScanMeta{120, 300, 150.0, 0.0}; }

DrillSpec bent(double a, double phi) {
  DrillSpec s;
  s.bend = BendModel{a, 70.0, phi};
  return s;
}

}  // namespace

TEST(Simulator, Deterministic) {
  ScanOptions o;
  o.noise_sigma = 0.003;
  o.seed = 42;
  const auto a = scan_drill(bent(0.2, 10), small_meta(), OcclusionModel{}, o);
  const auto b = scan_drill(bent(0.2, 10), small_meta(), OcclusionModel{}, o);
  ASSERT_EQ(a.scan.frames.size(), b.scan.frames.size());
  for (std::size_t i = 0; i < a.scan.frames.size(); ++i) {
    ASSERT_EQ(a.scan.frames[i].points.size(), b.scan.frames[i].points.size());
    for (std::size_t j = 0; j < a.scan.frames[i].points.size(); ++j) {
      EXPECT_EQ(a.scan.frames[i].points[j].z, b.scan.frames[i].points[j].z);
    }
  }
  o.seed = 43;
  const auto c = scan_drill(bent(0.2, 10), small_meta(), OcclusionModel{}, o);
  EXPECT_NE(c.scan.frames[0].points[5].z, a.scan.frames[0].points[5].z);
}

TEST(Simulator, StraightDrillBladeBackDepthIsExact) {
  const auto sim = scan_drill(DrillSpec{}, small_meta(), OcclusionModel{}, ScanOptions{});
  std::size_t k = 0, checked = 0;
  for (const auto& f : sim.scan.frames) {
    for (const auto& p : f.points) {
      if (sim.truth.labels[k++] != Label::blade_back) continue;
      EXPECT_NEAR(p.z, 150.0 - 5.0, 1e-9);
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000u);
  EXPECT_EQ(sim.truth.true_coaxiality, 0.0);
  EXPECT_EQ(sim.scan.meta.gamma, 5.0);
}

TEST(Simulator, LabelsAndDepthsMatchSurface) {
  const auto spec = bent(0.3, 37.0);
  const auto sim = scan_drill(spec, small_meta(), OcclusionModel{}, ScanOptions{});
  const double D = sim.scan.meta.axis_distance;
  std::size_t k = 0;
  for (const auto& f : sim.scan.frames) {
    const double t = 2.0 * std::numbers::pi * f.index / sim.scan.meta.frame_count;
    for (const auto& p : f.points) {
      const double s = D - p.z;
      const Point2 c = axis_center(spec, p.x);
      const double vy = s * std::sin(t) - c[0], vz = s * std::cos(t) - c[1];
      const auto surf = drill_surface(spec, p.x, std::atan2(vy, vz));
      EXPECT_EQ(surf.label, sim.truth.labels[k]) << "frame " << f.index << " x " << p.x;
      EXPECT_NEAR(std::hypot(vy, vz), surf.radius, 1e-7);
      ++k;
    }
  }
}

TEST(Simulator, BendProjectionAtFrameZero) {
  // At theta = 0 the sensor sees the z' component of the bow, b cos(phi),
  // on any blade-back sample.
  for (double phi : {0.0, 45.0}) {
    const auto spec = bent(0.3, phi);
    const auto sim = scan_drill(spec, small_meta(), OcclusionModel{}, ScanOptions{});
    const auto& f = sim.scan.frames[0];
    for (std::size_t j = 0; j < f.points.size(); ++j) {
      if (sim.truth.labels[j] != Label::blade_back) continue;
      const double b = bend_offset(spec, f.points[j].x);
      const double across = b * std::sin(phi * kDeg);
      const double want = 150.0 - b * std::cos(phi * kDeg) - std::sqrt(25.0 - across * across);
      if (f.points[j].x >= spec.shank_length) EXPECT_NEAR(f.points[j].z, want, 1e-9);
    }
  }
}

TEST(Simulator, BendOffsetShape) {
  const auto spec = bent(0.25, 0);
  EXPECT_EQ(bend_offset(spec, 20.0), 0.0);
  EXPECT_NEAR(bend_offset(spec, 40.0), 0.0, 1e-15);
  EXPECT_NEAR(bend_offset(spec, 70.0), 0.25, 1e-15);
  EXPECT_NEAR(bend_offset(spec, 100.0), 0.0, 1e-15);
  EXPECT_NEAR(true_coaxiality(spec), 0.5, 1e-15);
  DrillSpec late = spec;
  late.bend.apex_x = 90.0;
  EXPECT_NEAR(true_coaxiality(late), 0.5, 1e-15);
}

TEST(Simulator, OcclusionMonotone) {
  std::size_t prev = 0;
  for (double limit : {10.0, 30.0, 60.0, 89.0}) {
    OcclusionModel occ;
    occ.incidence_limit_deg = limit;
    const auto sim = scan_drill(bent(0.2, 0), small_meta(), occ, ScanOptions{});
    EXPECT_GE(sim.truth.labels.size(), prev) << "limit " << limit;
    prev = sim.truth.labels.size();
  }
}

TEST(Simulator, FluteBands) {
  DrillSpec s;
  s.flute_count = 3;
  s.blade_back_deg = 50.0;
  s.blade_lip_deg = 25.0;
  s.validate();
  const double x = s.shank_length;  // no twist yet
  for (int k = 0; k < 3; ++k) {
    const double base = 120.0 * k;
    EXPECT_EQ(drill_surface(s, x, (base + 10) * kDeg).label, Label::blade_back);
    EXPECT_EQ(drill_surface(s, x, (base + 49) * kDeg).label, Label::blade_back);
    EXPECT_EQ(drill_surface(s, x, (base + 60) * kDeg).label, Label::background);
    EXPECT_NEAR(drill_surface(s, x, (base + 60) * kDeg).radius, s.radius() - s.lip_height, 1e-12);
    EXPECT_LT(drill_surface(s, x, (base + 100) * kDeg).radius, s.radius() - s.lip_height);
  }
  // One full pitch of twist maps the pattern onto itself.
  EXPECT_EQ(drill_surface(s, x + s.helix_pitch, 10 * kDeg).label, Label::blade_back);
  EXPECT_EQ(drill_surface(s, 20.0, 70 * kDeg).radius, s.shank_radius());
}

TEST(Simulator, FieldOfViewError) {
  OcclusionModel occ;
  occ.fov_near = 20.0;
  occ.fov_far = 30.0;
  EXPECT_THROW(scan_drill(DrillSpec{}, small_meta(), occ, ScanOptions{}), SimulationError);
  ScanOptions o;
  o.x_max = 50.0;
  EXPECT_THROW(scan_drill(DrillSpec{}, small_meta(), OcclusionModel{}, o), SimulationError);
}

TEST(Simulator, InvalidSpec) {
  DrillSpec s;
  s.blade_back_deg = 170.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = DrillSpec{};
  s.bend.apex_x = 30.0;
  EXPECT_THROW(s.validate(), ConfigError);
  ScanOptions o;
  o.noise_sigma = -1.0;
  EXPECT_THROW(scan_drill(DrillSpec{}, small_meta(), OcclusionModel{}, o), ConfigError);
}

TEST(Simulator, OutlierInjection) {
  ScanOptions o;
  o.outlier_fraction = 0.05;
  o.seed = 3;
  const auto clean = scan_drill(bent(0.1, 0), small_meta(), OcclusionModel{}, ScanOptions{});
  const auto sim = scan_drill(bent(0.1, 0), small_meta(), OcclusionModel{}, o);
  std::size_t k = 0, n = 0;
  for (std::size_t i = 0; i < sim.scan.frames.size(); ++i) {
    for (std::size_t j = 0; j < sim.scan.frames[i].points.size(); ++j, ++k) {
      const double off = std::abs(sim.scan.frames[i].points[j].z - clean.scan.frames[i].points[j].z);
      if (sim.truth.outlier[k]) {
        ++n;
        EXPECT_GE(off, o.outlier_min - 1e-12);
        EXPECT_LE(off, o.outlier_max + 1e-12);
      } else {
        EXPECT_EQ(off, 0.0);
      }
    }
  }
  EXPECT_NEAR(static_cast<double>(n) / k, 0.05, 0.01);
}

TEST(CalibrationBlock, CollarAndStep) {
  CalibrationScanOptions o;
  const auto sim = scan_calibration_block(CalibrationBlockSpec{}, o);
  const auto& best = sim.scan.frames[static_cast<std::size_t>(o.best_frame)];
  for (const auto& p : best.points) {
    const bool collar = p.x >= 70.0 && p.x <= 80.0;
    EXPECT_NEAR(p.z, collar ? o.axis_distance : o.axis_distance + 3.0, 1e-12);
  }
  // Every other frame sits deeper on the collar.
  for (const auto& f : sim.scan.frames) {
    if (f.index == o.best_frame) continue;
    for (const auto& p : f.points) {
      if (p.x >= 70.0 && p.x <= 80.0) EXPECT_GT(p.z, o.axis_distance);
    }
  }
  EXPECT_EQ(sim.true_D, o.axis_distance);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "drillcoax/error.hpp"
#include "drillcoax/segmentation.hpp"
#include "support.hpp"

using namespace drillcoax;
namespace dct = drillcoax::testing;

namespace {

// Two-level surface: y < 5 is the near (blade back) level, y >= 5 sits 0.5 deeper.
UnrolledCloud stepped_cloud(double noise, std::uint64_t seed, double back_depth = 145.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, noise > 0 ? noise : 1.0);
  UnrolledCloud c;
  for (int f = 0; f < 100; ++f) {
    for (int s = 0; s < 40; ++s) {
      const double y = 0.1 * f + 0.05, x = 0.25 * s;
      const double z = (y < 5.0 ? back_depth : back_depth + 0.5) + (noise > 0 ? n(rng) : 0.0);
      c.points.push_back({x, y, z, f});
    }
  }
  return c;
}

SegmentationOptions stepped_options() {
  SegmentationOptions o;
  o.grid = GridShape{2, 1, 5, 20};
  return o;
}

}  // namespace

TEST(BuildGrid, CellIndexOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 7.0);
  UnrolledCloud c;
  for (int i = 0; i < 2000; ++i) c.points.push_back({u(rng), u(rng) * 0.5, 0.0, i});
  const GridShape shape{3, 2, 4, 5};
  const auto g = build_grid(c, shape);
  ASSERT_EQ(g.patch_count(), 3u * 2 * 4 * 5);
  ASSERT_EQ(g.point_count(), c.points.size());

  const double cw = (g.x_max() - g.x_min()) / 12.0, rh = (g.y_max() - g.y_min()) / 10.0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const int gx = std::min(11, static_cast<int>((c.points[i].x - g.x_min()) / cw));
    const int gy = std::min(9, static_cast<int>((c.points[i].y - g.y_min()) / rh));
    const std::size_t expect = static_cast<std::size_t>((gy / 5) * 3 + gx / 4) * 20 + (gy % 5) * 4 + gx % 4;
    EXPECT_EQ(g.patch_of_point(i), expect) << "point " << i;
  }
  for (std::size_t p = 0; p < g.patch_count(); ++p) {
    for (auto i : g.members(p)) EXPECT_EQ(g.patch_of_point(i), p);
    total += g.members(p).size();
  }
  EXPECT_EQ(total, c.points.size());
}

TEST(BuildGrid, MaxCornerLandsInLastPatch) {
  UnrolledCloud c;
  c.points = {{0, 0, 1, 0}, {1, 1, 1, 0}};
  const auto g = build_grid(c, GridShape{2, 2, 2, 2});
  EXPECT_EQ(g.patch_of_point(0), 0u);
  EXPECT_EQ(g.patch_of_point(1), g.patch_count() - 1);
}

TEST(BuildGrid, Errors) {
  EXPECT_THROW(build_grid(UnrolledCloud{}, GridShape{}), ConfigError);
  UnrolledCloud line;
  line.points = {{0, 0, 1, 0}, {1, 0, 1, 0}};
  EXPECT_THROW(build_grid(line, GridShape{}), DegenerateInputError);
  line.points[1].y = 1.0;
  EXPECT_THROW(build_grid(line, GridShape{0, 1, 1, 1}), ConfigError);
}

TEST(PatchMode, Examples) {
  EXPECT_NEAR(patch_mode(std::vector<double>{1.0, 1.01, 1.02, 2.0}, 0.05), 1.0, 1e-12);
  EXPECT_NEAR(patch_mode(std::vector<double>{0.1}, 0.039), 0.117, 1e-12);
  EXPECT_TRUE(std::isnan(patch_mode(std::vector<double>{}, 0.039)));
  EXPECT_THROW(patch_mode(std::vector<double>{1.0}, 0.0), ConfigError);
}

TEST(PatchMode, TieGoesToLowerBin) {
  EXPECT_NEAR(patch_mode(std::vector<double>{2.0, 2.0, 1.0, 1.0}, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(patch_mode(std::vector<double>{-1.0, 3.0}, 0.5), -1.0, 1e-12);
}

TEST(PatchMode, MatchesCountingOracle) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(145.0, 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> z(1 + trial % 17);
    for (auto& v : z) v = n(rng);
    EXPECT_NEAR(patch_mode(z, 0.039), dct::mode_by_counting(z, 0.039), 1e-9) << "trial " << trial;
  }
}

TEST(PatchMode, OrderInvariant) {
  std::vector<double> z{3.1, 3.2, 3.2, 3.25, 2.0, 3.19};
  const double a = patch_mode(z, 0.1);
  std::reverse(z.begin(), z.end());
  EXPECT_DOUBLE_EQ(patch_mode(z, 0.1), a);
}

TEST(ClassifyFeatures, SmallerMeanIsBladeBack) {
  EmResult r;
  r.model = GmmModel{{0.5, 0.5}, {146.0, 145.0}, {0.1, 0.1}};
  r.responsibilities = {0.2, 0.8, 0.9, 0.1, 0.5, 0.5};
  const auto labels = classify_features(r);
  ASSERT_EQ(labels.size(), 3u);
  EXPECT_EQ(labels[0], Label::blade_back);
  EXPECT_EQ(labels[1], Label::background);
  EXPECT_EQ(labels[2], Label::blade_back);  // tie
}

TEST(LabelsFromPatches, Broadcast) {
  UnrolledCloud c;
  c.points = {{0, 0, 1, 0}, {1, 1, 1, 0}, {0.1, 0.1, 1, 0}};
  const auto g = build_grid(c, GridShape{1, 1, 2, 1});
  const auto out = labels_from_patches(g, std::vector<Label>{Label::blade_back, Label::background});
  EXPECT_EQ(out, (std::vector<Label>{Label::blade_back, Label::background, Label::blade_back}));
}

TEST(Segment, SteppedSurfaceNoiseless) {
  const auto c = stepped_cloud(0.0, 1);
  const auto r = segment(c, stepped_options());
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    EXPECT_EQ(r.point_labels[i], c.points[i].y < 5.0 ? Label::blade_back : Label::background);
  }
  EXPECT_FALSE(r.homogeneous_cloud);
}

TEST(Segment, DepthShiftInvariance) {
  const auto a = segment(stepped_cloud(0.01, 4, 145.0), stepped_options());
  const auto b = segment(stepped_cloud(0.01, 4, 145.0 + 100 * 0.039), stepped_options());
  EXPECT_EQ(a.point_labels, b.point_labels);
}

TEST(Segment, FlatCloudIsHomogeneous) {
  auto c = stepped_cloud(0.0, 1);
  for (auto& p : c.points) p.z = 145.0;
  const auto r = segment(c, stepped_options());
  EXPECT_TRUE(r.homogeneous_cloud);
}

TEST(Segment, HomogeneousBlockBorrowsNeighbour) {
  // Block 0 holds only blade back; block 1 holds both levels.
  UnrolledCloud c;
  for (int f = 0; f < 100; ++f) {
    for (int s = 0; s < 40; ++s) {
      const double x = 0.25 * s, y = 0.1 * f;
      const bool deep = x >= 5.0 && y >= 5.0;
      c.points.push_back({x, y, deep ? 145.5 : 145.0, f});
    }
  }
  SegmentationOptions o;
  o.grid = GridShape{2, 1, 5, 20};
  const auto r = segment(c, o);
  EXPECT_TRUE(r.blocks[0].homogeneous);
  EXPECT_EQ(r.blocks[0].donors, (std::vector<std::size_t>{1}));
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    EXPECT_EQ(r.point_labels[i], c.points[i].z < 145.25 ? Label::blade_back : Label::background);
  }
}

TEST(Segment, SimulatedDrillAccuracy) {
  const auto sim = dct::simulate(dct::DrillCase{0.25, 30.0, 70.0, 0.003, 5});
  const auto seg = segment_scan(sim.scan, dct::segmentation_only_config());
  EXPECT_GE(dct::point_accuracy(seg.segmentation.point_labels, sim.truth.labels, sim.truth.outlier), 0.99);
}

TEST(DefaultGrid, PhysicalSizing) {
  const auto sim = dct::simulate(dct::DrillCase{});
  const auto g = default_grid(unroll(sim.scan), sim.scan.meta, GridSizing{});
  EXPECT_EQ(g.blocks_x, 20);
  EXPECT_EQ(g.blocks_y, 4);
  EXPECT_EQ(g.patches_x, 31);
  EXPECT_EQ(g.patches_y, 83);
  EXPECT_THROW(default_grid(UnrolledCloud{}, sim.scan.meta, GridSizing{}), ConfigError);
}

TEST(ClassicalGmm, SeparatesNoiselessStep) {
  const auto c = stepped_cloud(0.0, 1);
  const auto r = classical_gmm_segment(c, EmOptions{});
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    EXPECT_EQ(r.point_labels[i], c.points[i].y < 5.0 ? Label::blade_back : Label::background);
  }
}

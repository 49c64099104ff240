#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "drillcoax/error.hpp"
#include "drillcoax/spline.hpp"

using namespace drillcoax;

TEST(QuadraticSpline, InterpolatesKnots) {
  const std::vector<double> x{0, 1, 2.5, 3, 7}, z{1, -2, 0.5, 4, 4};
  const auto s = QuadraticSpline::fit(x, z);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(s(x[i]), z[i], 1e-14);
}

TEST(QuadraticSpline, ExactOnQuadratics) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const double a = u(rng), b = u(rng), c = u(rng);
    auto f = [&](double v) { return a * v * v + b * v + c; };
    std::vector<double> x{0.0}, z;
    for (int i = 0; i < 12; ++i) x.push_back(x.back() + 0.2 + u(rng) * u(rng) + 0.5);
    for (double v : x) z.push_back(f(v));
    const auto s = QuadraticSpline::fit(x, z);
    for (double v = x.front(); v <= x.back(); v += 0.013) {
      EXPECT_NEAR(s(v), f(v), 1e-9);
      EXPECT_NEAR(s.derivative(v), 2 * a * v + b, 1e-9);
    }
  }
}

TEST(QuadraticSpline, ContinuousSlope) {
  const std::vector<double> x{0, 1, 2, 4, 5, 9}, z{0, 3, -1, 2, 2, 0};
  const auto s = QuadraticSpline::fit(x, z);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    for (double t : {0.0, 0.5, 1.0}) {
      const double v = x[i] + t * (x[i + 1] - x[i]);
      if (v <= x.front() || v >= x.back()) continue;
      EXPECT_NEAR(s.derivative(v - 1e-9), s.derivative(v + 1e-9), 1e-6);
      EXPECT_NEAR(s(v - 1e-9), s(v + 1e-9), 1e-7);
    }
  }
}

TEST(QuadraticSpline, UnsortedAndDuplicateInput) {
  const std::vector<double> x{2, 0, 1, 1}, z{4, 0, 1, 3};
  const auto s = QuadraticSpline::fit(x, z);
  EXPECT_EQ(s.knots(), (std::vector<double>{0, 1, 2}));
  EXPECT_EQ(s.values(), (std::vector<double>{0, 2, 4}));
  EXPECT_NEAR(s(1.5), 3.0, 1e-14);  // collinear knots give a line
}

TEST(QuadraticSpline, Errors) {
  EXPECT_THROW(QuadraticSpline::fit(std::vector<double>{0, 1, 1}, std::vector<double>{0, 1, 2}), DataDeficiencyError);
  EXPECT_THROW(QuadraticSpline::fit(std::vector<double>{0, 1}, std::vector<double>{0}), ConfigError);
  EXPECT_THROW(QuadraticSpline::fit(std::vector<double>{0, 1, NAN}, std::vector<double>{0, 1, 2}), ConfigError);
  const auto s = QuadraticSpline::fit(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 4});
  EXPECT_THROW(s(-0.1), RangeError);
  EXPECT_THROW(s(2.1), RangeError);
  EXPECT_NO_THROW(s(2.0));
}

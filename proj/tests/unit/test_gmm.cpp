#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "drillcoax/error.hpp"
#include "drillcoax/gmm.hpp"
#include "support.hpp"

using namespace drillcoax;
namespace dct = drillcoax::testing;

namespace {

std::vector<double> mixture_sample(std::mt19937_64& rng, std::size_t n, double w0, double m0, double s0, double m1,
                                   double s1) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> a(m0, s0), b(m1, s1);
  std::vector<double> z(n);
  for (auto& v : z) v = u(rng) < w0 ? a(rng) : b(rng);
  return z;
}

}  // namespace

TEST(NormalPdf, StandardPeak) {
  EXPECT_NEAR(normal_pdf(0.0, 0.0, 1.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(normal_pdf(0.0, 0.0, 1.0), 0.39894, 1e-5);
}

TEST(InitGmm, TwoModes) {
  const auto m = init_gmm(std::vector<double>{10.0, 20.0});
  EXPECT_DOUBLE_EQ(m.sigmas[0], 2.5);
  EXPECT_DOUBLE_EQ(m.sigmas[1], 2.5);
  EXPECT_DOUBLE_EQ(m.means[0], 12.5);
  EXPECT_DOUBLE_EQ(m.means[1], 17.5);
  EXPECT_DOUBLE_EQ(m.weights[0], 0.5);
  EXPECT_DOUBLE_EQ(m.weights[1], 0.5);
  EXPECT_EQ(m.foreground(), 0u);
}

TEST(InitGmm, ThreeModes) {
  const auto m = init_gmm(std::vector<double>{0.0, 4.0, 8.0});
  EXPECT_DOUBLE_EQ(m.sigmas[0], 2.0);
  EXPECT_DOUBLE_EQ(m.means[0], 2.0);
  EXPECT_DOUBLE_EQ(m.means[1], 6.0);
}

TEST(InitGmm, Errors) {
  EXPECT_THROW(init_gmm(std::vector<double>{1.0}), ConfigError);
  EXPECT_THROW(init_gmm(std::vector<double>{3.0, 3.0, 3.0}), DegenerateInputError);
}

TEST(InitGmm, BracketsTrueClassMeans) {
  std::mt19937_64 rng(2);
  const auto z = mixture_sample(rng, 300, 0.7, 145.0, 0.01, 145.5, 0.01);
  const auto m = init_gmm(z);
  EXPECT_LT(m.means[0], m.means[1]);
  EXPECT_GT(m.means[0], 145.0 - 0.2);
  EXPECT_LT(m.means[0], 145.5);
  EXPECT_GT(m.means[1], 145.0);
}

TEST(GmmModel, ValidateRejectsBadModels) {
  GmmModel ok{{0.4, 0.6}, {0, 1}, {1, 1}};
  EXPECT_NO_THROW(ok.validate());
  EXPECT_THROW((GmmModel{{0.5, 0.6}, {0, 1}, {1, 1}}).validate(), ConfigError);
  EXPECT_THROW((GmmModel{{0.5, 0.5}, {0, 1}, {1, 0}}).validate(), ConfigError);
  EXPECT_THROW((GmmModel{{1.0}, {0, 1}, {1, 1}}).validate(), ConfigError);
}

TEST(EmFit, SingleComponentClosedForm) {
  const std::vector<double> z{-1.0, 0.0, 1.0};
  const auto fit = em_fit(z, GmmModel{{1.0}, {0.7}, {3.0}}, EmOptions{1e-14, 100, 1e-6});
  EXPECT_NEAR(fit.model.means[0], 0.0, 1e-12);
  EXPECT_NEAR(fit.model.sigmas[0], std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_DOUBLE_EQ(fit.model.weights[0], 1.0);
}

TEST(EmFit, RecoversWellSeparatedMeans) {
  std::mt19937_64 rng(42);
  const auto z = mixture_sample(rng, 2000, 0.5, 12.0, 0.5, 18.0, 0.5);
  const auto fit = em_fit(z, init_gmm(z), EmOptions{1e-10, 500, 1e-3});
  EXPECT_NEAR(fit.model.means[0], 12.0, 0.1);
  EXPECT_NEAR(fit.model.means[1], 18.0, 0.1);
  EXPECT_TRUE(fit.converged);
}

TEST(EmFit, InvariantsOverSeededRuns) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int run = 0; run < 100; ++run) {
    const double m0 = 5 * u(rng), m1 = m0 + 0.2 + 3 * u(rng);
    const auto z = mixture_sample(rng, 250, 0.2 + 0.6 * u(rng), m0, 0.05 + u(rng), m1, 0.05 + u(rng));
    const auto fit = em_fit(z, init_gmm(z), EmOptions{1e-10, 300, 1e-3});
    const auto& h = fit.log_likelihood_history;
    for (std::size_t i = 1; i < h.size(); ++i) {
      EXPECT_GE(h[i], h[i - 1] - 1e-9 * std::abs(h[i - 1])) << "run " << run << " iteration " << i;
    }
    EXPECT_TRUE(fit.monotone);
    for (std::size_t i = 0; i < z.size(); ++i) {
      EXPECT_NEAR(fit.responsibility(i, 0) + fit.responsibility(i, 1), 1.0, 1e-12);
    }
    double wsum = 0.0;
    for (double w : fit.model.weights) wsum += w;
    EXPECT_NEAR(wsum, 1.0, 1e-12);
    double integral = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      const double mu = fit.model.means[k], s = fit.model.sigmas[k];
      integral += fit.model.weights[k] *
                  dct::simpson([&](double x) { return normal_pdf(x, mu, s); }, mu - 10 * s, mu + 10 * s, 2000);
    }
    EXPECT_NEAR(integral, 1.0, 1e-6);
    EXPECT_NEAR(fit.log_likelihood, log_likelihood(z, fit.model), 1e-9 * std::abs(fit.log_likelihood));
  }
}

TEST(EmFit, DepthShiftEquivariance) {
  std::mt19937_64 rng(8);
  auto z = mixture_sample(rng, 400, 0.6, 145.0, 0.02, 145.5, 0.02);
  const auto a = em_fit(z, init_gmm(z), EmOptions{});
  for (auto& v : z) v += 3.0;
  const auto b = em_fit(z, init_gmm(z), EmOptions{});
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(b.model.means[k], a.model.means[k] + 3.0, 1e-6);
  for (std::size_t i = 0; i < z.size(); ++i) {
    EXPECT_EQ(a.responsibility(i, 0) >= 0.5, b.responsibility(i, 0) >= 0.5);
  }
}

TEST(EmFit, WeightedMatchesExpandedData) {
  const std::vector<double> values{1.0, 1.5, 4.0, 4.2, 5.0};
  const std::vector<double> counts{3, 1, 2, 5, 1};
  std::vector<double> expanded;
  for (std::size_t i = 0; i < values.size(); ++i) expanded.insert(expanded.end(), counts[i], values[i]);
  const auto init = init_gmm(expanded);
  const EmOptions o{1e-12, 500, 1e-3};
  const auto w = em_fit(values, counts, init, o);
  const auto e = em_fit(expanded, init, o);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(w.model.means[k], e.model.means[k], 1e-9);
    EXPECT_NEAR(w.model.sigmas[k], e.model.sigmas[k], 1e-9);
    EXPECT_NEAR(w.model.weights[k], e.model.weights[k], 1e-9);
  }
  EXPECT_NEAR(w.log_likelihood, e.log_likelihood, 1e-9);
}

TEST(EmFit, SigmaFloorClampsCollapse) {
  const std::vector<double> z{1.0, 1.0, 1.0, 1.0, 5.0, 5.1, 4.9};
  const auto fit = em_fit(z, init_gmm(z), EmOptions{1e-10, 200, 0.05});
  EXPECT_TRUE(fit.sigma_clamped);
  for (double s : fit.model.sigmas) EXPECT_GE(s, 0.05);
}

TEST(EmFit, RejectsBadOptions) {
  const std::vector<double> z{1, 2, 3};
  EXPECT_THROW(em_fit(z, init_gmm(z), EmOptions{1e-8, 10, 0.0}), ConfigError);
}

TEST(Posterior, SumsToOneAndFavoursNearerMean) {
  const GmmModel m{{0.5, 0.5}, {0.0, 1.0}, {0.2, 0.2}};
  const auto p = posterior(m, 0.1);
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
  EXPECT_GT(p[0], p[1]);
  const auto far = posterior(m, 1e3);  // both densities underflow
  EXPECT_NEAR(far[0] + far[1], 1.0, 1e-15);
  EXPECT_GT(far[1], far[0]);
}

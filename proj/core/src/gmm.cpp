#include "drillcoax/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "segmentation";

inline double log_normal_pdf(double z, double mu, double sigma) {
  const double u = (z - mu) / sigma;
  return -0.5 * u * u - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

// E-step for one sample: fills `post` with normalised responsibilities and
// returns log p(z).
double expectation(double z, const GmmModel& m, const std::vector<double>& log_w, double* post) {
  const std::size_t k_count = m.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < k_count; ++k) {
    post[k] = log_w[k] + log_normal_pdf(z, m.means[k], m.sigmas[k]);
    best = std::max(best, post[k]);
  }
  if (!std::isfinite(best)) {
    // Every component underflowed; fall back to the nearest mean.
    std::size_t nearest = 0;
    for (std::size_t k = 1; k < k_count; ++k) {
      if (std::abs(z - m.means[k]) < std::abs(z - m.means[nearest])) nearest = k;
    }
    for (std::size_t k = 0; k < k_count; ++k) post[k] = (k == nearest) ? 1.0 : 0.0;
    return best;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    post[k] = std::exp(post[k] - best);
    total += post[k];
  }
  for (std::size_t k = 0; k < k_count; ++k) post[k] /= total;
  return best + std::log(total);
}

std::vector<double> log_weights(const GmmModel& m) {
  std::vector<double> lw(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) lw[k] = std::log(m.weights[k]);
  return lw;
}

}  // namespace

double normal_pdf(double z, double mu, double sigma) {
  const double u = (z - mu) / sigma;
  return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double GmmModel::density(double z) const {
  double p = 0.0;
  for (std::size_t k = 0; k < size(); ++k) p += weights[k] * normal_pdf(z, means[k], sigmas[k]);
  return p;
}

void GmmModel::validate() const {
  if (means.empty() || weights.size() != means.size() || sigmas.size() != means.size()) {
    throw ConfigError(kModule, "mixture parameter vectors must be nonempty and of equal size");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    if (!(weights[k] >= 0.0 && weights[k] <= 1.0)) throw ConfigError(kModule, "mixture weight outside [0, 1]");
    if (!(sigmas[k] > 0.0)) throw ConfigError(kModule, "mixture sigma must be positive");
    if (!std::isfinite(means[k])) throw ConfigError(kModule, "mixture mean is not finite");
    sum += weights[k];
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(kModule, "mixture weights must sum to 1");
}

std::size_t GmmModel::foreground() const {
  return static_cast<std::size_t>(std::min_element(means.begin(), means.end()) - means.begin());
}

GmmModel init_gmm(std::span<const double> modes) {
  if (modes.size() < 2) {
    throw ConfigError(kModule, "mixture initialisation needs at least two patch modes");
  }
  const auto [lo, hi] = std::minmax_element(modes.begin(), modes.end());
  const double spread = *hi - *lo;
  if (!(spread > 0.0)) {
    throw DegenerateInputError(kModule, "all patch modes are identical (flat surface)");
  }
  const double mean = std::accumulate(modes.begin(), modes.end(), 0.0) / static_cast<double>(modes.size());
  const double sigma = spread / 4.0;
  return GmmModel{{0.5, 0.5}, {mean - sigma, mean + sigma}, {sigma, sigma}};
}

double log_likelihood(std::span<const double> features, const GmmModel& model) {
  const auto lw = log_weights(model);
  std::vector<double> post(model.size());
  double ll = 0.0;
  for (double z : features) ll += expectation(z, model, lw, post.data());
  return ll;
}

std::vector<double> posterior(const GmmModel& model, double z) {
  const auto lw = log_weights(model);
  std::vector<double> post(model.size());
  expectation(z, model, lw, post.data());
  return post;
}

EmResult em_fit(std::span<const double> features, const GmmModel& init, const EmOptions& options) {
  const std::vector<double> ones(features.size(), 1.0);
  return em_fit(features, ones, init, options);
}

EmResult em_fit(std::span<const double> features, std::span<const double> counts, const GmmModel& init,
                const EmOptions& options) {
  init.validate();
  if (counts.size() != features.size()) throw ConfigError(kModule, "EM feature and count sizes differ");
  if (!(options.tolerance > 0.0)) throw ConfigError(kModule, "EM tolerance must be positive");
  if (options.max_iterations < 0) throw ConfigError(kModule, "EM max_iterations must be >= 0");
  if (!(options.sigma_floor > 0.0)) throw ConfigError(kModule, "EM sigma floor must be positive");
  if (features.empty()) throw ConfigError(kModule, "EM needs at least one feature");

  const std::size_t n = features.size();
  const std::size_t k_count = init.size();
  double total_count = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0)) throw ConfigError(kModule, "EM feature counts must be non-negative");
    total_count += c;
  }
  if (!(total_count > 0.0)) throw ConfigError(kModule, "EM feature counts sum to zero");
  EmResult r;
  r.model = init;
  for (auto& s : r.model.sigmas) {
    if (s < options.sigma_floor) {
      s = options.sigma_floor;
      r.sigma_clamped = true;
    }
  }
  r.responsibilities.assign(n * k_count, 0.0);

  auto e_step = [&]() {
    const auto lw = log_weights(r.model);
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ll += counts[i] * expectation(features[i], r.model, lw, &r.responsibilities[i * k_count]);
    }
    if (std::isnan(ll)) throw NumericError(kModule, "EM log-likelihood is NaN");
    return ll;
  };

  double ll = e_step();
  r.log_likelihood_history.push_back(ll);

  std::vector<double> nk(k_count), sum_z(k_count), sum_sq(k_count);
  for (int it = 0; it < options.max_iterations; ++it) {
    // M-step.
    std::fill(nk.begin(), nk.end(), 0.0);
    std::fill(sum_z.begin(), sum_z.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < k_count; ++k) {
        const double g = counts[i] * r.responsibilities[i * k_count + k];
        nk[k] += g;
        sum_z[k] += g * features[i];
      }
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      if (nk[k] > 0.0) r.model.means[k] = sum_z[k] / nk[k];
    }
    std::fill(sum_sq.begin(), sum_sq.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < k_count; ++k) {
        const double d = features[i] - r.model.means[k];
        sum_sq[k] += counts[i] * r.responsibilities[i * k_count + k] * d * d;
      }
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      double sigma = nk[k] > 0.0 ? std::sqrt(sum_sq[k] / nk[k]) : options.sigma_floor;
      if (!(sigma >= options.sigma_floor)) {
        sigma = options.sigma_floor;
        r.sigma_clamped = true;
      }
      r.model.sigmas[k] = sigma;
      // A component that lost every sample keeps a tiny weight so log(w) stays finite.
      r.model.weights[k] = std::max(nk[k] / total_count, std::numeric_limits<double>::min());
    }
    const double wsum = std::accumulate(r.model.weights.begin(), r.model.weights.end(), 0.0);
    for (auto& w : r.model.weights) w /= wsum;

    const double next = e_step();
    r.iterations = it + 1;
    r.log_likelihood_history.push_back(next);
    const double scale = std::max(1.0, std::abs(ll));
    if (next < ll - 1e-12 * scale) r.monotone = false;
    const double gain = next - ll;
    ll = next;
    if (std::abs(gain) < options.tolerance * scale) {
      r.converged = true;
      break;
    }
  }
  r.log_likelihood = ll;
  return r;
}

}  // namespace drillcoax

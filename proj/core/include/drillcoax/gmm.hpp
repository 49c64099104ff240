#pragma once

// One-dimensional Gaussian mixtures over depth and their EM solver.

#include <span>
#include <vector>

namespace drillcoax {

/// K-component mixture p(z) = sum_k w_k N(z | mu_k, sigma_k). Component
/// weights are shared by all samples and sum to one.
struct GmmModel {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> sigmas;

  std::size_t size() const { return means.size(); }
  double density(double z) const;
  /// Throws ConfigError on mismatched sizes, weights outside [0,1] or not
  /// summing to one, or non-positive sigmas.
  void validate() const;
  /// Index of the component with the smallest mean (the foreground).
  std::size_t foreground() const;
};

/// Gaussian density with mean `mu` and standard deviation `sigma`.
double normal_pdf(double z, double mu, double sigma);

/// Two-component initialisation from patch modes:
///   sigma_F = sigma_B = (max - min) / 4
///   mu_F = mean - sigma_F, mu_B = mean + sigma_B, w_F = w_B = 0.5
/// Component 0 is the foreground. Throws ConfigError for fewer than two modes
/// and DegenerateInputError when every mode is identical.
GmmModel init_gmm(std::span<const double> modes);

struct EmOptions {
  double tolerance = 1e-8;     // relative change of the log-likelihood
  int max_iterations = 200;
  double sigma_floor = 0.0113; // default histogram bin width / sqrt(12)
};

struct EmResult {
  GmmModel model;
  /// Row-major N x K posterior probabilities.
  std::vector<double> responsibilities;
  int iterations = 0;
  double log_likelihood = 0.0;
  /// Log-likelihood of the initial model followed by one entry per iteration.
  std::vector<double> log_likelihood_history;
  bool converged = false;
  bool sigma_clamped = false;
  /// False if any iteration decreased the log-likelihood beyond round-off.
  bool monotone = true;

  double responsibility(std::size_t sample, std::size_t component) const {
    return responsibilities[sample * model.size() + component];
  }
};

/// Maximum-likelihood fit by expectation-maximisation. Stops once the
/// relative log-likelihood gain drops below `tolerance` or after
/// `max_iterations`. Sigmas are clamped at `sigma_floor`. Throws
/// NumericError if the likelihood becomes NaN.
EmResult em_fit(std::span<const double> features, const GmmModel& init, const EmOptions& options);

/// Same fit where feature i occurs `counts[i]` times. Responsibilities are
/// reported per distinct feature. Used for quantised features such as
/// histogram modes, where many samples share a value.
EmResult em_fit(std::span<const double> features, std::span<const double> counts, const GmmModel& init,
                const EmOptions& options);

/// Log-likelihood of `features` under `model`.
double log_likelihood(std::span<const double> features, const GmmModel& model);

/// Posterior component probabilities of a single value (size K).
std::vector<double> posterior(const GmmModel& model, double z);

}  // namespace drillcoax

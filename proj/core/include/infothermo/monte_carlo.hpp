#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "infothermo/state.hpp"

namespace infothermo {

enum class Family { gaussian, poisson };

/// One Monte Carlo experiment: `trials` repetitions of averaging m draws and
/// adding N(0, sigma_r2) representation noise.
struct SamplingSpec {
  Family family = Family::gaussian;
  double mu = 0.0;
  double sigma2 = 1.0;  ///< Gaussian only; Poisson uses mu.
  std::int64_t m = 100;
  double sigma_r2 = 0.0;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 0;  ///< 0 means one per hardware thread.

  static SamplingSpec gaussian(double mu, double sigma2, std::int64_t m, double sigma_r2 = 0.0);
  static SamplingSpec poisson(double mu, std::int64_t m, double sigma_r2 = 0.0);

  /// Variance of a single observation.
  double observation_variance() const;
  /// Requires m >= 1, trials >= 100, finite parameters, mu > 0 for Poisson.
  void validate() const;
};

/// Noisy sample means, one per trial. Trial i draws from its own generator
/// seeded by (seed, i), so the output does not depend on `workers`.
std::vector<double> simulate_estimator(const SamplingSpec& spec);

enum class EntropyMethod { gaussian_moment, nearest_neighbor };

/// Differential entropy of a 1-D sample in nats. Throws
/// Error(degenerate_ensemble) when the sample has fewer than three distinct
/// values (or, for nearest_neighbor, any repeated value), and
/// Error(insufficient_data) below 100 points.
double estimate_entropy(std::span<const double> ensemble, EntropyMethod method);

struct EntropyValidationOptions {
  EntropyMethod method = EntropyMethod::gaussian_moment;
  /// 0 selects 0.02 nats for Gaussian and 0.03 for Poisson.
  double tolerance = 0.0;
};

struct EntropyValidation {
  double h_empirical = 0.0;
  double h_formula = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  /// Nearest-neighbour estimate on the same scale, as a cross-check.
  double h_nearest_neighbor = 0.0;
  /// m >= 100 and trials >= 1e4.
  bool asymptotic = false;
  /// Unset in diagnostic (non-asymptotic) mode.
  std::optional<bool> pass;
};

/// Compares the ensemble entropy, shifted to the noise model's convention,
/// with entropy(). Non-Gaussian families need sigma_r2 > 0 for a density to
/// exist; otherwise Error(precondition_violation).
EntropyValidation validate_entropy_formula(const SamplingSpec& spec, const NoiseModel& noise,
                                           const EntropyValidationOptions& options = {});

struct VarianceRatio {
  std::int64_t m = 0;
  double ratio = 0.0;  ///< Var(mean) m / sigma2
};

struct VarianceScaling {
  std::vector<VarianceRatio> ratios;
  std::optional<bool> pass;  ///< Unset when trials < 1e4.
};

/// Runs `base` at each m without representation noise, so the ratio sees the
/// sampling variance alone. Throws Error(insufficient_data) for fewer than
/// three m values and Error(invalid_argument) when they are not ascending.
VarianceScaling validate_variance_scaling(const SamplingSpec& base,
                                          std::span<const std::int64_t> m_list);

struct Normality {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  bool pass = false;
};

/// |skewness| < 0.05 and |excess kurtosis| < 0.1. Needs at least 1e4 points.
Normality normality_check(std::span<const double> ensemble);

double sample_mean(std::span<const double> xs);
/// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> xs);

void write_ensemble_csv(std::ostream& out, std::span<const double> ensemble);

}  // namespace infothermo

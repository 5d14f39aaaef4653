#pragma once

// Closed-form state functions at a single point (m, sigma2) of the inference
// state space. All quantities are in nats or in squared signal units.

namespace infothermo {

enum class EntropyConvention {
  /// Additive constant is -1/2 log(sigma_r2), so H is a mutual information.
  mutual_info,
  /// Additive constant supplied by the caller.
  raw,
};

struct NoiseModel {
  double sigma_r2 = 1.0;  ///< Representation-noise variance, >= 0.
  EntropyConvention convention = EntropyConvention::mutual_info;
  double raw_constant = 0.0;  ///< Used only by the raw convention (nats).

  static NoiseModel mutual_info(double sigma_r2);
  static NoiseModel raw(double sigma_r2, double constant);

  /// Throws Error(invalid_argument) on a negative or non-finite variance.
  void validate() const;

  /// Additive entropy constant; mutual_info with sigma_r2 == 0 throws
  /// Error(invalid_convention).
  double entropy_constant() const;
};

/// A point in the state space. m is a continuous effective sample size and
/// sigma2 is the per-observation variance (inverse Fisher information).
struct InferenceState {
  double m = 1.0;
  double sigma2 = 0.0;

  void validate() const;

  double estimator_variance() const { return sigma2 / m; }
};

using PathNode = InferenceState;

/// Entropy together with a flag for the raw-convention singularity
/// sigma2/m + sigma_r2 == 0, where the value is -infinity.
struct EntropyValue {
  double nats = 0.0;
  bool singular = false;
};

EntropyValue entropy_detail(const InferenceState& state, const NoiseModel& noise);

/// H = 1/2 log(sigma2/m + sigma_r2) + constant.
double entropy(const InferenceState& state, const NoiseModel& noise);

/// Uncertainty susceptibility 2(sigma2 + m sigma_r2).
double theta(const InferenceState& state, const NoiseModel& noise);

/// Conditional minimum of theta at fixed m, reached at sigma2 = 0.
double theta_floor(double m, const NoiseModel& noise);

/// theta_floor / theta. Throws Error(efficiency_undefined) when sigma_r2 == 0.
double efficiency(const InferenceState& state, const NoiseModel& noise);

/// Minimum mean-square error of the additive Gaussian channel with
/// SNR = sigma2 / (m sigma_r2). Throws Error(degenerate_state) when theta == 0.
double mmse(const InferenceState& state, const NoiseModel& noise);

struct Partials {
  double dh_dsigma2_at_m = 0.0;      ///< 1 / theta
  double dh_dm_at_sigma2 = 0.0;      ///< -sigma2 / (theta m)
  double dsigma2_dm_at_h = 0.0;      ///< sigma2 / m
  double dtheta_dm_at_h = 0.0;       ///< theta / m
};

Partials partials(const InferenceState& state, const NoiseModel& noise);

/// Quasi-specific heat at fixed m, d sigma2 / d theta. Exactly one half
/// because theta is affine in sigma2 with slope 2.
constexpr double quasi_specific_heat() { return 0.5; }

struct QuasiPotentials {
  double helmholtz = 0.0;  ///< A = sigma2 - theta H
  double gibbs = 0.0;      ///< G = -theta H
};

QuasiPotentials quasi_potentials(const InferenceState& state, const NoiseModel& noise);

/// Susceptibility seen by an estimator with variance v >= sigma2/m:
/// 2 m (v + sigma_r2). Throws Error(crlb_violation) below the Cramer-Rao bound.
double theta_suboptimal(double estimator_variance, const InferenceState& state,
                        const NoiseModel& noise);

}  // namespace infothermo

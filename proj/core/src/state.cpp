#include "infothermo/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "infothermo/error.hpp"

namespace infothermo {

namespace {

std::string describe(const InferenceState& s) {
  std::ostringstream os;
  os << "(m=" << s.m << ", sigma2=" << s.sigma2 << ")";
  return os.str();
}

}  // namespace

NoiseModel NoiseModel::mutual_info(double sigma_r2) {
  NoiseModel n{sigma_r2, EntropyConvention::mutual_info, 0.0};
  n.validate();
  return n;
}

NoiseModel NoiseModel::raw(double sigma_r2, double constant) {
  NoiseModel n{sigma_r2, EntropyConvention::raw, constant};
  n.validate();
  return n;
}

void NoiseModel::validate() const {
  if (!std::isfinite(sigma_r2) || sigma_r2 < 0.0) {
    std::ostringstream os;
    os << "representation-noise variance must be finite and >= 0, got " << sigma_r2;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  if (convention == EntropyConvention::raw && !std::isfinite(raw_constant)) {
    throw Error(ErrorCode::invalid_argument, "raw entropy constant must be finite");
  }
}

double NoiseModel::entropy_constant() const {
  if (convention == EntropyConvention::raw) return raw_constant;
  if (!(sigma_r2 > 0.0)) {
    throw Error(ErrorCode::invalid_convention,
                "mutual_info convention requires sigma_r2 > 0");
  }
  return -0.5 * std::log(sigma_r2);
}

void InferenceState::validate() const {
  if (!std::isfinite(m) || !(m > 0.0) || !std::isfinite(sigma2) || sigma2 < 0.0) {
    throw Error(ErrorCode::invalid_argument,
                "state requires m > 0 and sigma2 >= 0, got " + describe(*this));
  }
}

EntropyValue entropy_detail(const InferenceState& state, const NoiseModel& noise) {
  state.validate();
  noise.validate();
  if (noise.convention == EntropyConvention::mutual_info) {
    if (!(noise.sigma_r2 > 0.0)) {
      throw Error(ErrorCode::invalid_convention,
                  "mutual_info convention requires sigma_r2 > 0");
    }
    // log1p keeps precision near the noise floor where H -> 0.
    return {0.5 * std::log1p(state.sigma2 / (state.m * noise.sigma_r2)), false};
  }
  const double arg = state.sigma2 / state.m + noise.sigma_r2;
  if (arg == 0.0) {
    return {-std::numeric_limits<double>::infinity(), true};
  }
  return {0.5 * std::log(arg) + noise.raw_constant, false};
}

double entropy(const InferenceState& state, const NoiseModel& noise) {
  return entropy_detail(state, noise).nats;
}

double theta(const InferenceState& state, const NoiseModel& noise) {
  return 2.0 * (state.sigma2 + state.m * noise.sigma_r2);
}

double theta_floor(double m, const NoiseModel& noise) {
  return 2.0 * m * noise.sigma_r2;
}

double efficiency(const InferenceState& state, const NoiseModel& noise) {
  state.validate();
  if (!(noise.sigma_r2 > 0.0)) {
    throw Error(ErrorCode::efficiency_undefined,
                "efficiency is undefined for sigma_r2 = 0 (the floor is zero)");
  }
  return theta_floor(state.m, noise) / theta(state, noise);
}

double mmse(const InferenceState& state, const NoiseModel& noise) {
  state.validate();
  const double th = theta(state, noise);
  if (!(th > 0.0)) {
    throw Error(ErrorCode::degenerate_state,
                "mmse undefined at theta = 0, state " + describe(state));
  }
  return 2.0 * state.sigma2 * noise.sigma_r2 / th;
}

Partials partials(const InferenceState& state, const NoiseModel& noise) {
  state.validate();
  const double th = theta(state, noise);
  if (!(th > 0.0)) {
    throw Error(ErrorCode::degenerate_state,
                "partials undefined at theta = 0, state " + describe(state));
  }
  return {1.0 / th, -state.sigma2 / (th * state.m), state.sigma2 / state.m,
          th / state.m};
}

QuasiPotentials quasi_potentials(const InferenceState& state, const NoiseModel& noise) {
  const EntropyValue h = entropy_detail(state, noise);
  if (h.singular) {
    throw Error(ErrorCode::degenerate_state,
                "quasi-potentials undefined where the entropy is singular");
  }
  const double th = theta(state, noise);
  return {state.sigma2 - th * h.nats, -th * h.nats};
}

double theta_suboptimal(double estimator_variance, const InferenceState& state,
                        const NoiseModel& noise) {
  state.validate();
  const double bound = state.sigma2 / state.m;
  // A few ulps of slack so that v computed as sigma2/m is accepted.
  if (!(estimator_variance >= bound * (1.0 - 4.0 * std::numeric_limits<double>::epsilon()))) {
    std::ostringstream os;
    os << "estimator variance " << estimator_variance << " is below the Cramer-Rao bound "
       << bound;
    throw Error(ErrorCode::crlb_violation, os.str());
  }
  const double v = std::max(estimator_variance, bound);
  return 2.0 * state.m * (v + noise.sigma_r2);
}

}  // namespace infothermo

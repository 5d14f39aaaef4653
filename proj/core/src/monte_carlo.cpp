#include "infothermo/monte_carlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/digamma.hpp>

#include "infothermo/error.hpp"

namespace infothermo {

namespace {

constexpr std::size_t kMinEnsemble = 100;
constexpr std::size_t kAsymptoticTrials = 10000;
constexpr std::int64_t kAsymptoticM = 100;

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

double one_trial(const SamplingSpec& spec, std::mt19937_64& rng) {
  double sum = 0.0;
  if (spec.family == Family::gaussian) {
    if (spec.sigma2 > 0.0) {
      std::normal_distribution<double> obs(spec.mu, std::sqrt(spec.sigma2));
      for (std::int64_t j = 0; j < spec.m; ++j) sum += obs(rng);
    } else {
      sum = spec.mu * static_cast<double>(spec.m);
    }
  } else {
    std::poisson_distribution<std::int64_t> obs(spec.mu);
    for (std::int64_t j = 0; j < spec.m; ++j) sum += static_cast<double>(obs(rng));
  }
  double mean = sum / static_cast<double>(spec.m);
  if (spec.sigma_r2 > 0.0) {
    std::normal_distribution<double> noise(0.0, std::sqrt(spec.sigma_r2));
    mean += noise(rng);
  }
  return mean;
}

std::size_t distinct_count_at_least(std::vector<double> sorted, std::size_t cap) {
  std::size_t n = sorted.empty() ? 0 : 1;
  for (std::size_t i = 1; i < sorted.size() && n < cap; ++i) n += sorted[i] != sorted[i - 1];
  return n;
}

}  // namespace

SamplingSpec SamplingSpec::gaussian(double mu, double sigma2, std::int64_t m, double sigma_r2) {
  SamplingSpec s;
  s.family = Family::gaussian;
  s.mu = mu;
  s.sigma2 = sigma2;
  s.m = m;
  s.sigma_r2 = sigma_r2;
  return s;
}

SamplingSpec SamplingSpec::poisson(double mu, std::int64_t m, double sigma_r2) {
  SamplingSpec s;
  s.family = Family::poisson;
  s.mu = mu;
  s.sigma2 = mu;
  s.m = m;
  s.sigma_r2 = sigma_r2;
  return s;
}

double SamplingSpec::observation_variance() const {
  return family == Family::poisson ? mu : sigma2;
}

void SamplingSpec::validate() const {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "m must be >= 1");
  if (trials < kMinEnsemble) {
    throw Error(ErrorCode::invalid_argument,
                "trials must be >= 100, got " + std::to_string(trials));
  }
  if (!std::isfinite(mu) || !std::isfinite(sigma_r2) || sigma_r2 < 0.0) {
    throw Error(ErrorCode::invalid_argument, "mu and sigma_r2 must be finite, sigma_r2 >= 0");
  }
  if (family == Family::gaussian && (!std::isfinite(sigma2) || sigma2 < 0.0)) {
    throw Error(ErrorCode::invalid_argument, "gaussian sigma2 must be finite and >= 0");
  }
  if (family == Family::poisson && !(mu > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "poisson mean must be > 0");
  }
}

std::vector<double> simulate_estimator(const SamplingSpec& spec) {
  spec.validate();
  std::vector<double> out(spec.trials);
  unsigned workers = spec.workers ? spec.workers : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::min<std::size_t>(spec.trials, 256)));

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = trial_rng(spec.seed, i);
      out[i] = one_trial(spec, rng);
    }
  };
  if (workers == 1) {
    run(0, spec.trials);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (spec.trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(spec.trials, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(run, begin, end);
  }
  for (auto& t : pool) t.join();
  return out;
}

double sample_mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s / static_cast<double>(xs.size() - 1);
}

double estimate_entropy(std::span<const double> ensemble, EntropyMethod method) {
  std::vector<double> sorted(ensemble.begin(), ensemble.end());
  std::sort(sorted.begin(), sorted.end());
  if (distinct_count_at_least(sorted, 3) < 3) {
    throw Error(ErrorCode::degenerate_ensemble,
                "ensemble has fewer than three distinct values; no density to estimate");
  }
  if (ensemble.size() < kMinEnsemble) {
    throw Error(ErrorCode::insufficient_data, "entropy estimate needs at least 100 points, got " +
                                                  std::to_string(ensemble.size()));
  }
  if (method == EntropyMethod::gaussian_moment) {
    const double var = sample_variance(ensemble);
    return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * var);
  }

  const std::size_t n = sorted.size();
  double sum_log = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double eps = std::numeric_limits<double>::infinity();
    if (i > 0) eps = sorted[i] - sorted[i - 1];
    if (i + 1 < n) eps = std::min(eps, sorted[i + 1] - sorted[i]);
    if (!(eps > 0.0)) {
      throw Error(ErrorCode::degenerate_ensemble,
                  "ensemble has repeated values; nearest-neighbour distance is zero");
    }
    sum_log += std::log(eps);
  }
  const auto nd = static_cast<double>(n);
  return boost::math::digamma(nd) - boost::math::digamma(1.0) + std::log(2.0) + sum_log / nd;
}

EntropyValidation validate_entropy_formula(const SamplingSpec& spec, const NoiseModel& noise,
                                           const EntropyValidationOptions& options) {
  spec.validate();
  noise.validate();
  if (noise.sigma_r2 != spec.sigma_r2) {
    std::ostringstream os;
    os << "noise model sigma_r2 = " << noise.sigma_r2 << " differs from the sampling spec ("
       << spec.sigma_r2 << ")";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  if (spec.family != Family::gaussian && !(spec.sigma_r2 > 0.0)) {
    throw Error(ErrorCode::precondition_violation,
                "non-Gaussian families need sigma_r2 > 0 for the estimator to have a density");
  }
  const double h_formula =
      entropy(InferenceState{static_cast<double>(spec.m), spec.observation_variance()}, noise);

  const auto ensemble = simulate_estimator(spec);
  const double shift = noise.entropy_constant() - 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

  EntropyValidation v;
  v.h_formula = h_formula;
  v.h_empirical = estimate_entropy(ensemble, options.method) + shift;
  v.gap = std::abs(v.h_empirical - h_formula);
  try {
    v.h_nearest_neighbor = estimate_entropy(ensemble, EntropyMethod::nearest_neighbor) + shift;
  } catch (const Error&) {
    v.h_nearest_neighbor = std::numeric_limits<double>::quiet_NaN();
  }
  v.tolerance = options.tolerance > 0.0 ? options.tolerance
                                        : (spec.family == Family::gaussian ? 0.02 : 0.03);
  v.asymptotic = spec.m >= kAsymptoticM && spec.trials >= kAsymptoticTrials;
  if (v.asymptotic) v.pass = v.gap <= v.tolerance;
  return v;
}

VarianceScaling validate_variance_scaling(const SamplingSpec& base,
                                          std::span<const std::int64_t> m_list) {
  if (m_list.size() < 3) {
    throw Error(ErrorCode::insufficient_data, "variance scaling needs at least three m values");
  }
  if (!std::is_sorted(m_list.begin(), m_list.end()) ||
      std::adjacent_find(m_list.begin(), m_list.end()) != m_list.end()) {
    throw Error(ErrorCode::invalid_argument, "m values must be strictly ascending");
  }
  const double s2 = base.observation_variance();
  if (!(s2 > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "variance scaling needs a positive observation variance");
  }
  VarianceScaling out;
  bool all_in = true;
  for (std::size_t k = 0; k < m_list.size(); ++k) {
    SamplingSpec spec = base;
    spec.m = m_list[k];
    spec.sigma_r2 = 0.0;
    spec.seed = base.seed + 0x9e3779b97f4a7c15ULL * (k + 1);
    const auto ens = simulate_estimator(spec);
    const double ratio = sample_variance(ens) * static_cast<double>(spec.m) / s2;
    out.ratios.push_back({spec.m, ratio});
    all_in = all_in && ratio >= 0.9 && ratio <= 1.1;
  }
  if (base.trials >= kAsymptoticTrials) out.pass = all_in;
  return out;
}

Normality normality_check(std::span<const double> ensemble) {
  if (ensemble.size() < kAsymptoticTrials) {
    throw Error(ErrorCode::insufficient_data, "normality check needs at least 1e4 points, got " +
                                                  std::to_string(ensemble.size()));
  }
  const double mean = sample_mean(ensemble);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : ensemble) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const auto n = static_cast<double>(ensemble.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw Error(ErrorCode::degenerate_ensemble, "ensemble has zero variance");
  Normality out;
  out.skewness = m3 / std::pow(m2, 1.5);
  out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  out.pass = std::abs(out.skewness) < 0.05 && std::abs(out.excess_kurtosis) < 0.1;
  return out;
}

void write_ensemble_csv(std::ostream& out, std::span<const double> ensemble) {
  out << "trial,estimate\n";
  char buf[32];
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto res = std::to_chars(buf, buf + sizeof buf, ensemble[i]);
    out << i << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
}

}  // namespace infothermo

#include "infothermo/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "infothermo/error.hpp"

namespace infothermo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

void BudgetProblem::validate() const {
  noise.validate();
  if (!std::isfinite(m_a) || !std::isfinite(m_b) || !(m_a > 0.0) || !(m_b > m_a)) {
    std::ostringstream os;
    os << "budget problem needs m_b > m_a > 0, got m_a=" << m_a << ", m_b=" << m_b;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  if (!std::isfinite(work_budget) || !(work_budget > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "work budget must be positive and finite");
  }
}

OptimalTrajectory OptimalTrajectory::evaluate(const BudgetProblem& problem) {
  problem.validate();
  const double r = problem.noise.sigma_r2;
  const double coeff = (problem.work_budget + r * (problem.m_b - problem.m_a)) /
                       (2.0 * (std::sqrt(problem.m_b) - std::sqrt(problem.m_a)));
  OptimalTrajectory t{coeff, problem, true};
  // sigma2 is concave in sqrt(m) and vanishes at m = 0, so it can only turn
  // negative past its second root (coeff / r)^2; checking m_b suffices.
  const double end = t.sigma2(problem.m_b);
  t.feasible = end >= -1e-12 * std::max(1.0, coeff * std::sqrt(problem.m_b));
  return t;
}

double OptimalTrajectory::sigma2(double m) const {
  return coefficient * std::sqrt(m) - m * problem.noise.sigma_r2;
}

double OptimalTrajectory::theta(double m) const {
  return 2.0 * coefficient * std::sqrt(m);
}

double OptimalTrajectory::running_work(double m) const {
  return 2.0 * coefficient * (std::sqrt(m) - std::sqrt(problem.m_a)) -
         problem.noise.sigma_r2 * (m - problem.m_a);
}

double OptimalTrajectory::running_gain(double m) const {
  return 0.5 * std::log(m / problem.m_a) -
         problem.noise.sigma_r2 / coefficient * (std::sqrt(m) - std::sqrt(problem.m_a));
}

std::optional<double> OptimalTrajectory::peak_m() const {
  const double r = problem.noise.sigma_r2;
  if (!(r > 0.0)) return std::nullopt;
  const double root = coefficient / (2.0 * r);
  const double m = root * root;
  if (m > problem.m_a && m < problem.m_b) return m;
  return std::nullopt;
}

ProcessPath OptimalTrajectory::to_path(int n_nodes) const {
  if (n_nodes < 2) throw Error(ErrorCode::invalid_argument, "to_path needs n_nodes >= 2");
  std::vector<PathNode> nodes;
  nodes.reserve(static_cast<std::size_t>(n_nodes));
  for (int k = 0; k < n_nodes; ++k) {
    const double m = k + 1 == n_nodes
                         ? problem.m_b
                         : problem.m_a + (problem.m_b - problem.m_a) * k / (n_nodes - 1);
    nodes.push_back({m, std::max(0.0, sigma2(m))});
  }
  return ProcessPath(std::move(nodes));
}

OptimalTrajectory solve_optimal(const BudgetProblem& problem) {
  OptimalTrajectory t = OptimalTrajectory::evaluate(problem);
  if (!t.feasible) {
    const double r = problem.noise.sigma_r2;
    const double zero = (t.coefficient / r) * (t.coefficient / r);
    std::ostringstream os;
    os << "optimal trajectory is negative on m in (" << std::max(zero, problem.m_a) << ", "
       << problem.m_b << "]; increase the work budget or narrow [m_a, m_b]";
    throw Error(ErrorCode::infeasible_budget, os.str());
  }
  return t;
}

double optimal_info_gain(const BudgetProblem& problem) {
  solve_optimal(problem);
  const double r = problem.noise.sigma_r2;
  const double dsqrt = std::sqrt(problem.m_b) - std::sqrt(problem.m_a);
  return 0.5 * std::log(problem.m_b / problem.m_a) -
         2.0 * r * dsqrt * dsqrt / (problem.work_budget + (problem.m_b - problem.m_a) * r);
}

double max_info_bound(double m_a, double m_b) {
  if (!(m_a > 0.0) || !(m_b >= m_a)) {
    throw Error(ErrorCode::invalid_argument, "max_info_bound needs m_b >= m_a > 0");
  }
  return 0.5 * std::log(m_b / m_a);
}

DpResult dp_oracle(const BudgetProblem& problem, const DpOptions& options) {
  problem.noise.validate();
  if (!(problem.m_a > 0.0) || !(problem.m_b > problem.m_a) ||
      !std::isfinite(problem.work_budget) || problem.work_budget < 0.0) {
    throw Error(ErrorCode::invalid_argument, "dp_oracle needs m_b > m_a > 0 and W >= 0");
  }
  if (options.m_grid_size < 8 || options.budget_grid_size < 8 ||
      (options.sigma_levels.empty() && options.sigma_grid_size < 8)) {
    throw Error(ErrorCode::invalid_argument, "dp_oracle grid sizes must be >= 8");
  }

  const double r = problem.noise.sigma_r2;
  const double W = problem.work_budget;
  const double sa = std::sqrt(problem.m_a), sb = std::sqrt(problem.m_b);

  DpResult result;
  std::vector<double> levels = options.sigma_levels;
  if (levels.empty()) {
    double top = options.sigma2_max;
    if (!(top > 0.0)) {
      // Generous envelope: the constant-variance spend of W concentrated at
      // m_b plus the largest bump sigma_r2 can support.
      top = 1.25 * (W * sb / (2.0 * (sb - sa)) + r * (sa + sb) * (sa + sb) / 16.0);
    }
    for (int j = 0; j < options.sigma_grid_size; ++j) {
      levels.push_back(top * j / (options.sigma_grid_size - 1));
    }
    result.sigma2_max = top;
  } else {
    for (double s : levels) {
      if (!std::isfinite(s) || s < 0.0) {
        throw Error(ErrorCode::invalid_argument, "sigma2 levels must be finite and >= 0");
      }
    }
    result.sigma2_max = *std::max_element(levels.begin(), levels.end());
  }

  const int M = options.m_grid_size;
  const int B = options.budget_grid_size;
  const std::size_t S = levels.size();
  std::vector<double> m(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    m[static_cast<std::size_t>(i)] =
        problem.m_a * std::pow(problem.m_b / problem.m_a, static_cast<double>(i) / (M - 1));
  }
  m.back() = problem.m_b;

  // Per-step gain and work with sigma2 held at a level; both are exact.
  auto step_gain = [&](std::size_t i, double s) {
    if (s == 0.0) return 0.0;
    const double lr = std::log(m[i + 1] / m[i]);
    if (r == 0.0) return 0.5 * lr;
    return 0.5 * (lr - std::log1p((m[i + 1] - m[i]) * r / (s + m[i] * r)));
  };
  auto step_work = [&](std::size_t i, double s) { return s * std::log(m[i + 1] / m[i]); };

  const double bin = W / (B - 1);
  result.budget_bin_width = bin;
  auto interp = [&](const std::vector<double>& v, double x) {
    if (x < 0.0) return kNegInf;
    if (bin == 0.0) return v[0];
    const double pos = std::min(x / bin, static_cast<double>(B - 1));
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    if (v[lo] == kNegInf) return kNegInf;
    return v[lo] + frac * (v[lo + 1] - v[lo]);
  };

  // value[i][k]: best gain from node i onwards with remaining budget k * bin.
  std::vector<std::vector<double>> value(static_cast<std::size_t>(M),
                                         std::vector<double>(static_cast<std::size_t>(B), 0.0));
  for (int i = M - 2; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    for (int k = 0; k < B; ++k) {
      const double budget = k * bin;
      double best = kNegInf;
      for (std::size_t j = 0; j < S; ++j) {
        const double w = step_work(ui, levels[j]);
        if (w > budget) continue;
        const double tail = interp(value[ui + 1], budget - w);
        if (tail == kNegInf) continue;
        best = std::max(best, step_gain(ui, levels[j]) + tail);
      }
      value[ui][static_cast<std::size_t>(k)] = best;
    }
  }

  // Forward re-trace with the exact remaining budget.
  double remaining = W;
  double gain = 0.0;
  std::vector<std::size_t> choice;
  for (int i = 0; i + 1 < M; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double best = kNegInf;
    std::size_t arg = S;
    for (std::size_t j = 0; j < S; ++j) {
      const double w = step_work(ui, levels[j]);
      if (w > remaining) continue;
      const double tail = interp(value[ui + 1], remaining - w);
      if (tail == kNegInf) continue;
      const double v = step_gain(ui, levels[j]) + tail;
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    if (arg == S) {
      std::ostringstream os;
      os << "no sigma2 level fits the remaining budget " << remaining << " at step " << i;
      throw Error(ErrorCode::no_feasible_path, os.str());
    }
    choice.push_back(arg);
    gain += step_gain(ui, levels[arg]);
    remaining -= step_work(ui, levels[arg]);
  }

  std::vector<PathNode> nodes;
  nodes.push_back({m[0], levels[choice[0]]});
  for (std::size_t i = 0; i < choice.size(); ++i) {
    const double s = levels[choice[i]];
    nodes.push_back({m[i + 1], s});
    if (i + 1 < choice.size() && levels[choice[i + 1]] != s) {
      nodes.push_back({m[i + 1], levels[choice[i + 1]]});
    }
  }
  result.best_gain = gain;
  result.work_used = W - remaining;
  result.best_path = ProcessPath(std::move(nodes));
  return result;
}

EfficiencyBound global_efficiency_bound(const CyclePath& cycle, const NoiseModel& noise) {
  noise.validate();
  EfficiencyBound out;
  const ProcessPath& path = cycle.path();
  out.information = information_gain(path, noise);
  out.work = sampling_work(path);

  double variation = 0.0;
  bool positive = false, negative = false;
  const auto nodes = path.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const PathNode& a = nodes[i];
    const PathNode& b = nodes[i + 1];
    const double dm = b.m - a.m;
    if (dm == 0.0 || (a.sigma2 == 0.0 && b.sigma2 == 0.0)) continue;
    // sigma2 is linear and non-negative on the segment, so the integrand
    // keeps the sign of dm.
    variation += std::abs(sampling_work(ProcessPath({a, b})));
    (dm > 0.0 ? positive : negative) = true;
  }
  if (variation == 0.0 || std::abs(out.work) <= 1e-12 * variation) {
    throw Error(ErrorCode::undefined_ratio,
                "net sampling work over the cycle is zero; information/work is undefined");
  }
  out.sign_definite = !(positive && negative);
  out.ratio = out.information / out.work;
  out.min_m = cycle.min_m();
  const double floor = theta_floor(out.min_m, noise);
  out.bound = floor > 0.0 ? 1.0 / floor : std::numeric_limits<double>::infinity();
  out.holds = out.ratio <= out.bound * (1.0 + 1e-12);
  return out;
}

StationaryDirection entropy_production_stationarity(const InferenceState& point,
                                                    const NoiseModel& noise, double dsigma2,
                                                    int n_probes) {
  point.validate();
  noise.validate();
  if (!(noise.sigma_r2 > 0.0)) {
    throw Error(ErrorCode::no_stationary_direction,
                "with sigma_r2 = 0 theta cannot be held fixed while sigma2 changes");
  }
  if (!std::isfinite(dsigma2)) {
    throw Error(ErrorCode::invalid_argument, "d sigma2 must be finite");
  }
  StationaryDirection out;
  if (dsigma2 == 0.0) {
    out.verified_minimum = true;
    return out;
  }
  if (n_probes < 2) throw Error(ErrorCode::invalid_argument, "need at least two probes");

  const double theta0 = theta(point, noise);
  auto production = [&](double dm) {
    const InferenceState end{point.m + dm, point.sigma2 + dsigma2};
    end.validate();
    return dsigma2 / theta(end, noise);
  };
  auto variation = [&](double dm) { return std::abs(production(dm) - dsigma2 / theta0); };

  out.dsigma2 = dsigma2;
  out.dm = -dsigma2 / noise.sigma_r2;
  out.production = production(out.dm);
  out.production_variation = variation(out.dm);
  out.min_perturbed_variation = std::numeric_limits<double>::infinity();
  out.verified_minimum = true;
  for (int k = 0; k < n_probes; ++k) {
    const double eps = -0.5 + static_cast<double>(k) / (n_probes - 1);
    if (std::abs(eps) < 1e-12) continue;
    const double v = variation(out.dm * (1.0 + eps));
    out.min_perturbed_variation = std::min(out.min_perturbed_variation, v);
    if (!(v > out.production_variation)) out.verified_minimum = false;
  }
  return out;
}

}  // namespace infothermo

#pragma once

#include <optional>
#include <vector>

#include "infothermo/paths.hpp"
#include "infothermo/state.hpp"

namespace infothermo {

/// Maximise information gained between m_a and m_b for a fixed sampling work.
struct BudgetProblem {
  double m_a = 1.0;
  double m_b = 2.0;
  double work_budget = 1.0;
  NoiseModel noise{};

  /// Requires m_b > m_a > 0 and a positive finite budget.
  void validate() const;
};

/// Closed-form variational optimum sigma2(m) = coefficient sqrt(m) - m sigma_r2.
/// theta / sqrt(m) equals 2 coefficient everywhere along it.
struct OptimalTrajectory {
  double coefficient = 0.0;
  BudgetProblem problem{};
  bool feasible = false;

  /// Builds the trajectory without throwing on infeasibility; `feasible`
  /// records whether sigma2 stays >= 0 on [m_a, m_b].
  static OptimalTrajectory evaluate(const BudgetProblem& problem);

  double sigma2(double m) const;
  double theta(double m) const;
  /// Sampling work spent between m_a and m.
  double running_work(double m) const;
  /// Information gained between m_a and m.
  double running_gain(double m) const;
  /// Location of the interior maximum of sigma2, if it lies inside (m_a, m_b).
  std::optional<double> peak_m() const;

  /// Samples the trajectory on n_nodes points evenly spaced in m.
  ProcessPath to_path(int n_nodes) const;
};

/// Throws Error(infeasible_budget) naming the m-interval where sigma2 < 0.
OptimalTrajectory solve_optimal(const BudgetProblem& problem);

/// Closed-form optimal gain; propagates infeasibility from solve_optimal.
double optimal_info_gain(const BudgetProblem& problem);

/// 1/2 log(m_b / m_a), the bound on the gain of any admissible path.
double max_info_bound(double m_a, double m_b);

struct DpOptions {
  int m_grid_size = 64;        ///< Nodes of the geometric m grid (steps = size - 1).
  int sigma_grid_size = 64;    ///< Uniform sigma2 levels on [0, sigma2_max].
  int budget_grid_size = 64;   ///< Uniform remaining-budget levels on [0, W].
  /// Upper sigma2 level; 0 picks a default from W and sigma_r2 alone.
  double sigma2_max = 0.0;
  /// Explicit sigma2 levels. When non-empty these replace the uniform grid
  /// and the minimum size checks do not apply to them.
  std::vector<double> sigma_levels{};
};

struct DpResult {
  double best_gain = 0.0;
  ProcessPath best_path = ProcessPath::stationary({1.0, 0.0});
  double work_used = 0.0;
  double budget_bin_width = 0.0;
  double sigma2_max = 0.0;
};

/// Brute-force dynamic program over a geometric m grid. Each m-step holds
/// sigma2 at one of the grid levels (the path is a staircase; vertical moves
/// cost nothing and gain nothing), with per-step gain and work integrated
/// exactly. The value table is indexed by remaining budget and interpolated
/// linearly between levels; the reported path is re-traced forward with the
/// exact remaining budget, so it never spends more than W. best_gain is the
/// exact gain of that path. Throws Error(no_feasible_path) when no level fits.
DpResult dp_oracle(const BudgetProblem& problem, const DpOptions& options = {});

struct EfficiencyBound {
  double ratio = 0.0;   ///< information / sampling work over the cycle
  double bound = 0.0;   ///< 1 / theta_floor(m_min)
  double min_m = 0.0;
  double information = 0.0;
  double work = 0.0;
  /// (sigma2/m) dm never changes sign along the cycle, the hypothesis under
  /// which ratio <= bound is guaranteed.
  bool sign_definite = false;
  bool holds = false;
};

/// Throws Error(undefined_ratio) when the net sampling work vanishes.
EfficiencyBound global_efficiency_bound(const CyclePath& cycle, const NoiseModel& noise);

struct StationaryDirection {
  double dm = 0.0;
  double dsigma2 = 0.0;
  /// d Sigma = d sigma2 / theta(end state) along the stationary direction.
  double production = 0.0;
  /// |d Sigma(direction) - d sigma2 / theta(start)|, zero on the stationary direction.
  double production_variation = 0.0;
  /// Smallest production_variation over the sampled perturbed directions.
  double min_perturbed_variation = 0.0;
  bool verified_minimum = false;
};

/// Direction (dm, d sigma2) that keeps theta fixed, dm = -d sigma2 / sigma_r2,
/// along which the entropy production d sigma2 / theta does not vary to first
/// order. Minimality is checked against `n_probes` perturbed directions
/// dm (1 + eps) for eps spread over [-0.5, 0.5].
/// Throws Error(no_stationary_direction) when sigma_r2 == 0.
StationaryDirection entropy_production_stationarity(const InferenceState& point,
                                                    const NoiseModel& noise, double dsigma2,
                                                    int n_probes = 16);

}  // namespace infothermo

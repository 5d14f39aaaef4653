#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "infothermo/geometry.hpp"
#include "infothermo/state.hpp"

namespace infothermo {

/// Piecewise-linear trajectory in (m, sigma2). At least two nodes, all
/// valid, consecutive nodes distinct. The only exception is the explicit
/// stationary() path, which sits at one point.
class ProcessPath {
 public:
  explicit ProcessPath(std::vector<PathNode> nodes);

  /// Degenerate two-node path that never leaves `node`.
  static ProcessPath stationary(const PathNode& node);

  std::span<const PathNode> nodes() const { return nodes_; }
  std::size_t segment_count() const { return nodes_.size() - 1; }
  const PathNode& front() const { return nodes_.front(); }
  const PathNode& back() const { return nodes_.back(); }

  ProcessPath reversed() const;

 private:
  struct Unchecked {};
  ProcessPath(std::vector<PathNode> nodes, Unchecked) : nodes_(std::move(nodes)) {}

  std::vector<PathNode> nodes_;
};

enum class Orientation : std::int8_t { clockwise = -1, degenerate = 0, counterclockwise = 1 };

/// Closed ProcessPath (first node equals last to 1e-12 relative).
class CyclePath {
 public:
  /// Throws Error(not_a_cycle) when the endpoints differ.
  explicit CyclePath(ProcessPath path);

  const ProcessPath& path() const { return path_; }

  /// Shoelace area with m on the horizontal axis and sigma2 vertical.
  double signed_area() const;
  Orientation orientation() const;
  bool is_simple() const;
  double min_m() const;

  std::vector<geom::Point2> ring() const;

 private:
  ProcessPath path_;
};

CyclePath cycle_from_ring(std::span<const geom::Point2> ring);

/// Integral of (sigma2/m) dm along the path.
double sampling_work(const ProcessPath& path);

/// Integral of sigma2/(m theta) dm, i.e. minus the relaxation part of dH.
double information_gain(const ProcessPath& path, const NoiseModel& noise);

/// Integral of d sigma2 / theta.
double reversible_entropy_flux(const ProcessPath& path, const NoiseModel& noise);

/// Line integral of dH built from the analytic partial derivatives.
double entropy_differential_integral(const ProcessPath& path, const NoiseModel& noise);

/// Integral of theta dH computed by parts from the entropy function itself:
/// [theta H] - sum over segments of delta-theta times the mean of H.
double theta_dh_integral(const ProcessPath& path, const NoiseModel& noise);

/// Line integral of d theta (segment by segment quadrature).
double theta_differential_integral(const ProcessPath& path, const NoiseModel& noise);

/// Line integral of d sigma2 (segment by segment quadrature).
double sigma2_differential_integral(const ProcessPath& path);

/// Discretisation residual of d sigma2 = theta dH + (sigma2/m) dm. Every
/// segment is cut into n_steps equal steps; on each step the right-hand side
/// is evaluated with theta and sigma2/m at the step midpoint and dH as the
/// exact entropy difference. Returns the sum of absolute step residuals,
/// which falls off as the square of the step size.
double first_law_residual(const ProcessPath& path, const NoiseModel& noise, int n_steps);

/// Largest single-step residual, which falls off as the cube of the step.
double first_law_max_step_residual(const ProcessPath& path, const NoiseModel& noise,
                                   int n_steps);

enum class ProcessKind { isochoric, adiabatic, isothermal };

/// Canonical quasi-process from `start` with n_nodes evenly spaced nodes.
/// `end` is the final m for adiabatic and isothermal processes, and the final
/// sigma2 for the isochoric one (m is held fixed there). An isothermal
/// process that would drive sigma2 negative throws Error(infeasible_process).
ProcessPath make_process(ProcessKind kind, const PathNode& start, double end,
                         const NoiseModel& noise, int n_nodes = 2);

struct ClosureReport {
  double dh_loop = 0.0;
  double dsigma2_loop = 0.0;
  double dtheta_loop = 0.0;
  double theta_dh_loop = 0.0;
  double sampling_work = 0.0;
  double information_gain = 0.0;
  double signed_area = 0.0;
};

ClosureReport cycle_closure_check(const CyclePath& cycle, const NoiseModel& noise);

/// Region used by the random cycle generator: m in [0.5, 1e3], sigma2 in [0, 100].
geom::Box default_cycle_box();

/// Seeded random cycle: rectangle, convex polygon or discretised ellipse,
/// traversed in either direction.
CyclePath random_cycle(std::mt19937_64& rng, const geom::Box& box = default_cycle_box());

std::vector<CyclePath> random_cycles(std::uint64_t seed, std::size_t count,
                                     const geom::Box& box = default_cycle_box());

}  // namespace infothermo

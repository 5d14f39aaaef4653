#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infothermo/geometry.hpp"
#include "infothermo/paths.hpp"
#include "infothermo/state.hpp"

namespace infothermo {

/// Tweedie-type fluctuation scaling sigma2(mu) = c mu^p.
struct ConstitutiveScaling {
  double c = 1.0;
  double p = 1.0;

  double sigma2(double mu) const;
  double dsigma2_dmu(double mu) const;
  /// Non-decreasing in mu; the hypothesis of the cyclic inequality.
  bool monotone() const { return c > 0.0 && p >= 0.0; }
  void validate() const;
};

/// Sampling dynamics dm/dt = g(m, m_eq(mu)). The default g is the
/// linearised relaxation -rate (m - m_eq); `law` replaces it when set.
struct SamplingDynamics {
  double rate = 1.0;
  double m_eq_scale = 1.0;
  /// Exponent of m_eq(mu) = scale mu^exponent; unset means p/2 of the scaling.
  std::optional<double> m_eq_exponent{};
  std::function<double(double m, double m_eq)> law{};

  double m_eq(double mu, const ConstitutiveScaling& scaling) const;
  double dm_dt(double m, double m_eq) const;
  void validate() const;
};

/// Periodic piecewise-linear stimulus mu(t). Breakpoint times start at 0 and
/// are non-decreasing; two breakpoints at the same time make a jump. The last
/// time is the period.
class Waveform {
 public:
  explicit Waveform(std::vector<std::pair<double, double>> breakpoints);

  static Waveform constant(double mu, double period);
  /// low -> high over `rise`, hold `dwell_high`, back over `fall`, hold `dwell_low`.
  static Waveform trapezoid(double low, double high, double rise, double dwell_high,
                            double fall, double dwell_low);
  /// Instant step to `high` for `on`, instant step back for `off`.
  static Waveform square(double low, double high, double on, double off);

  double period() const { return breakpoints_.back().first; }
  bool periodic() const;
  double operator()(double t) const;
  std::span<const std::pair<double, double>> breakpoints() const { return breakpoints_; }

 private:
  std::vector<std::pair<double, double>> breakpoints_;
};

struct LoopPoint {
  double mu = 0.0;
  double m = 1.0;

  friend bool operator==(const LoopPoint&, const LoopPoint&) = default;
};

/// Closed piecewise-linear loop in (mu, m); mu on the horizontal axis.
/// Exact consecutive repeats are dropped on construction.
class StimulusLoop {
 public:
  /// Throws Error(not_closed) if first and last points differ (1e-12 relative)
  /// and Error(invalid_argument) for mu < 0 or m <= 0.
  explicit StimulusLoop(std::vector<LoopPoint> points);

  std::span<const LoopPoint> points() const { return points_; }
  std::vector<geom::Point2> ring() const;
  double signed_area() const;
  Orientation orientation() const;
  bool is_simple() const;
  /// Fewer than three distinct points.
  bool is_point_like() const;
  StimulusLoop reversed() const;

 private:
  std::vector<LoopPoint> points_;
};

StimulusLoop loop_from_ring(std::span<const geom::Point2> ring);

/// H(mu, m) with sigma2 = scaling(mu).
double entropy_at(double mu, double m, const ConstitutiveScaling& scaling,
                  const NoiseModel& noise);

/// d^2 H / dm dmu = -sigma_r2 / (2 m^2 (sigma_r2 + sigma2/m)^2) d sigma2/d mu.
double mixed_derivative(double mu, double m, const ConstitutiveScaling& scaling,
                        const NoiseModel& noise);

struct SimulationOptions {
  std::size_t max_loop_points = 1000;
  double closure_tolerance = 1e-6;
};

/// Integrates the sampling dynamics under the periodic stimulus from
/// m(0) = m_eq(mu(0)) over every whole period that fits in t_end and
/// returns the final period as a closed loop. Classical RK4 with step
/// min(dt, 1/(50 rate)); constant stimulus segments under the linear law use
/// the exact exponential update. Throws Error(not_closed) for a non-periodic
/// stimulus or when the last period fails to close to closure_tolerance.
StimulusLoop simulate_driven_cycle(const Waveform& stimulus, const SamplingDynamics& dynamics,
                                   const ConstitutiveScaling& scaling, double t_end, double dt,
                                   const SimulationOptions& options = {});

/// m(t) under the same integrator for a single pass over [0, t_end];
/// returns (t, mu, m) samples at every step. Used by callers that need the
/// transient rather than the closed loop.
struct TracePoint {
  double t = 0.0;
  double mu = 0.0;
  double m = 0.0;
};
std::vector<TracePoint> simulate_trace(const Waveform& stimulus, const SamplingDynamics& dynamics,
                                       const ConstitutiveScaling& scaling, double t_end,
                                       double dt, std::optional<double> m0 = std::nullopt);

struct CyclicInformation {
  double line_integral = 0.0;
  /// Area integral of -d^2H/dm dmu with the loop's orientation sign; absent
  /// when the loop is not simple (the Green's-theorem check is skipped).
  std::optional<double> area_integral{};
  bool simple = false;
};

/// -loop integral of (dH/dm) dm, segment by segment.
CyclicInformation cyclic_information(const StimulusLoop& loop, const ConstitutiveScaling& scaling,
                                     const NoiseModel& noise);

struct SecondLawVerdict {
  int orientation = 0;  ///< +1 counterclockwise, -1 clockwise, 0 point-like
  double cyclic_info = 0.0;
  std::optional<double> area_integral{};
  bool reversed = false;
  bool holds = false;
  std::string note{};
};

/// Positively oriented loops hold when cyclic_info >= -1e-9; clockwise loops
/// are judged after flipping the sign. Throws Error(precondition_violation)
/// for a non-monotone scaling or a self-intersecting loop.
SecondLawVerdict second_law_check(const StimulusLoop& loop, const ConstitutiveScaling& scaling,
                                  const NoiseModel& noise);

}  // namespace infothermo

#include "infothermo/cycle_laws.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infothermo/error.hpp"
#include "infothermo/quadrature.hpp"

namespace infothermo {

double ConstitutiveScaling::sigma2(double mu) const { return c * std::pow(mu, p); }

double ConstitutiveScaling::dsigma2_dmu(double mu) const {
  if (p == 0.0) return 0.0;
  return c * p * std::pow(mu, p - 1.0);
}

void ConstitutiveScaling::validate() const {
  if (!std::isfinite(c) || !std::isfinite(p) || !(c > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "scaling needs finite c > 0 and finite p");
  }
}

double SamplingDynamics::m_eq(double mu, const ConstitutiveScaling& scaling) const {
  const double exponent = m_eq_exponent.value_or(0.5 * scaling.p);
  return m_eq_scale * std::pow(mu, exponent);
}

double SamplingDynamics::dm_dt(double m, double m_eq) const {
  if (law) return law(m, m_eq);
  return -rate * (m - m_eq);
}

void SamplingDynamics::validate() const {
  if (!std::isfinite(rate) || !(rate > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "relaxation rate must be positive");
  }
  if (!std::isfinite(m_eq_scale) || !(m_eq_scale > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "m_eq scale must be positive");
  }
  if (m_eq_exponent && (!std::isfinite(*m_eq_exponent) || *m_eq_exponent < 0.0)) {
    throw Error(ErrorCode::invalid_argument, "m_eq exponent must be >= 0 (m_eq non-decreasing)");
  }
}

Waveform::Waveform(std::vector<std::pair<double, double>> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "waveform needs at least two breakpoints");
  }
  if (breakpoints_.front().first != 0.0) {
    throw Error(ErrorCode::invalid_argument, "waveform must start at t = 0");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const auto [t, mu] = breakpoints_[i];
    if (!std::isfinite(t) || !std::isfinite(mu) || mu < 0.0) {
      throw Error(ErrorCode::invalid_argument, "waveform breakpoints need finite t and mu >= 0");
    }
    if (i > 0 && t < breakpoints_[i - 1].first) {
      throw Error(ErrorCode::invalid_argument, "waveform times must be non-decreasing");
    }
  }
  if (!(period() > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "waveform period must be positive");
  }
}

Waveform Waveform::constant(double mu, double period) {
  return Waveform({{0.0, mu}, {period, mu}});
}

Waveform Waveform::trapezoid(double low, double high, double rise, double dwell_high,
                             double fall, double dwell_low) {
  const double t1 = rise, t2 = t1 + dwell_high, t3 = t2 + fall, t4 = t3 + dwell_low;
  return Waveform({{0.0, low}, {t1, high}, {t2, high}, {t3, low}, {t4, low}});
}

Waveform Waveform::square(double low, double high, double on, double off) {
  return Waveform({{0.0, low}, {0.0, high}, {on, high}, {on, low}, {on + off, low}});
}

bool Waveform::periodic() const {
  const double a = breakpoints_.front().second, b = breakpoints_.back().second;
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

double Waveform::operator()(double t) const {
  const double T = period();
  double local = std::fmod(t, T);
  if (local < 0.0) local += T;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), local,
                             [](double v, const auto& bp) { return v < bp.first; });
  if (it == breakpoints_.end()) return breakpoints_.back().second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.second + (hi.second - lo.second) * (local - lo.first) / (hi.first - lo.first);
}

StimulusLoop::StimulusLoop(std::vector<LoopPoint> points) {
  for (const auto& p : points) {
    if (!std::isfinite(p.mu) || !std::isfinite(p.m) || p.mu < 0.0 || !(p.m > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "loop points need mu >= 0 and m > 0");
    }
    if (points_.empty() || !(points_.back() == p)) points_.push_back(p);
  }
  if (points_.empty()) throw Error(ErrorCode::invalid_argument, "empty loop");
  const LoopPoint& a = points_.front();
  const LoopPoint& b = points_.back();
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (!close(a.mu, b.mu) || !close(a.m, b.m)) {
    std::ostringstream os;
    os << "loop is open: start (" << a.mu << ", " << a.m << ") vs end (" << b.mu << ", "
       << b.m << ")";
    throw Error(ErrorCode::not_closed, os.str());
  }
  if (points_.size() == 1) points_.push_back(points_.front());
  points_.back() = points_.front();
}

std::vector<geom::Point2> StimulusLoop::ring() const {
  std::vector<geom::Point2> r;
  r.reserve(points_.size());
  for (const auto& p : points_) r.push_back({p.mu, p.m});
  return r;
}

double StimulusLoop::signed_area() const { return geom::signed_area(ring()); }

Orientation StimulusLoop::orientation() const {
  if (is_point_like()) return Orientation::degenerate;
  const double a = signed_area();
  if (a > 0.0) return Orientation::counterclockwise;
  if (a < 0.0) return Orientation::clockwise;
  return Orientation::degenerate;
}

bool StimulusLoop::is_simple() const { return geom::is_simple(ring()); }

bool StimulusLoop::is_point_like() const { return geom::open_ring(ring()).size() < 3; }

StimulusLoop StimulusLoop::reversed() const {
  return StimulusLoop(std::vector<LoopPoint>(points_.rbegin(), points_.rend()));
}

StimulusLoop loop_from_ring(std::span<const geom::Point2> ring) {
  std::vector<LoopPoint> pts;
  pts.reserve(ring.size() + 1);
  for (const auto& q : ring) pts.push_back({q.x, q.y});
  if (!pts.empty() && !(pts.front() == pts.back())) pts.push_back(pts.front());
  return StimulusLoop(std::move(pts));
}

double entropy_at(double mu, double m, const ConstitutiveScaling& scaling,
                  const NoiseModel& noise) {
  return entropy(InferenceState{m, scaling.sigma2(mu)}, noise);
}

double mixed_derivative(double mu, double m, const ConstitutiveScaling& scaling,
                        const NoiseModel& noise) {
  const double r = noise.sigma_r2;
  if (r == 0.0) return 0.0;
  const double slope = scaling.dsigma2_dmu(mu);
  if (slope == 0.0) return 0.0;
  const double u = r + scaling.sigma2(mu) / m;
  return -r / (2.0 * m * m * u * u) * slope;
}

namespace {

struct Sample {
  double t;
  double mu;
  double m;
  bool corner;
};

// Advances m across local times [0, stop] of one stimulus period, calling
// visit after every step. Returns the final m.
template <typename Visit>
double advance_period(const Waveform& w, const SamplingDynamics& dyn,
                      const ConstitutiveScaling& scaling, double m, double t_offset,
                      double stop, double h_max, Visit&& visit) {
  const auto bps = w.breakpoints();
  const bool linear_law = !dyn.law;
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    const auto [ta, mua] = bps[k];
    const auto [tb, mub] = bps[k + 1];
    if (ta >= stop) break;
    if (tb == ta) {
      visit(Sample{t_offset + ta, mub, m, true});
      continue;
    }
    const double end = std::min(tb, stop);
    const auto n = static_cast<long>(std::ceil((end - ta) / h_max - 1e-9));
    const double h = (end - ta) / static_cast<double>(std::max(n, 1L));
    auto mu_at = [&](double tau) { return mua + (mub - mua) * (tau - ta) / (tb - ta); };
    auto f = [&](double tau, double mm) { return dyn.dm_dt(mm, dyn.m_eq(mu_at(tau), scaling)); };
    const bool exact = linear_law && mua == mub;
    const double decay = exact ? std::exp(-dyn.rate * h) : 0.0;
    const double target = exact ? dyn.m_eq(mua, scaling) : 0.0;
    for (long i = 1; i <= std::max(n, 1L); ++i) {
      const double t0 = ta + (i - 1) * h;
      if (exact) {
        m = target + (m - target) * decay;
      } else {
        const double k1 = f(t0, m);
        const double k2 = f(t0 + 0.5 * h, m + 0.5 * h * k1);
        const double k3 = f(t0 + 0.5 * h, m + 0.5 * h * k2);
        const double k4 = f(t0 + h, m + h * k3);
        m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      const double t1 = i == n ? end : ta + i * h;
      visit(Sample{t_offset + t1, mu_at(t1), m, i == n});
    }
    if (end < tb) break;
  }
  return m;
}

double step_limit(const SamplingDynamics& dyn, double dt) {
  if (!std::isfinite(dt) || !(dt > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "time step must be positive");
  }
  return std::min(dt, 1.0 / (50.0 * dyn.rate));
}

}  // namespace

StimulusLoop simulate_driven_cycle(const Waveform& stimulus, const SamplingDynamics& dynamics,
                                   const ConstitutiveScaling& scaling, double t_end, double dt,
                                   const SimulationOptions& options) {
  dynamics.validate();
  scaling.validate();
  if (!stimulus.periodic()) {
    std::ostringstream os;
    os << "stimulus is not periodic: mu(0) = " << stimulus.breakpoints().front().second
       << ", mu(T) = " << stimulus.breakpoints().back().second;
    throw Error(ErrorCode::not_closed, os.str());
  }
  const double T = stimulus.period();
  const auto periods = static_cast<long>(std::floor(t_end / T + 1e-9));
  if (periods < 1) {
    throw Error(ErrorCode::invalid_argument, "t_end must cover at least one stimulus period");
  }
  const double h = step_limit(dynamics, dt);

  double m = dynamics.m_eq(stimulus(0.0), scaling);
  if (!(m > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "m_eq(mu(0)) must be positive");
  }
  for (long k = 0; k + 1 < periods; ++k) {
    m = advance_period(stimulus, dynamics, scaling, m, k * T, T, h, [](const Sample&) {});
  }

  const double m_start = m;
  std::vector<Sample> samples{{(periods - 1) * T, stimulus(0.0), m, true}};
  m = advance_period(stimulus, dynamics, scaling, m, (periods - 1) * T, T, h,
                     [&](const Sample& s) { samples.push_back(s); });

  const double gap = std::abs(m - m_start) / std::max(std::abs(m_start), 1e-300);
  if (!(gap < options.closure_tolerance)) {
    std::ostringstream os;
    os << "trajectory did not close after " << periods << " period(s): relative gap " << gap
       << " exceeds " << options.closure_tolerance << "; increase t_end";
    throw Error(ErrorCode::not_closed, os.str());
  }

  const std::size_t max_points = std::max<std::size_t>(options.max_loop_points, 8);
  const std::size_t stride = (samples.size() + max_points - 1) / max_points;
  std::vector<LoopPoint> pts;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i % stride == 0 || samples[i].corner || i + 1 == samples.size()) {
      pts.push_back({samples[i].mu, samples[i].m});
    }
  }
  pts.back() = pts.front();
  return StimulusLoop(std::move(pts));
}

std::vector<TracePoint> simulate_trace(const Waveform& stimulus, const SamplingDynamics& dynamics,
                                       const ConstitutiveScaling& scaling, double t_end,
                                       double dt, std::optional<double> m0) {
  dynamics.validate();
  scaling.validate();
  if (!std::isfinite(t_end) || t_end < 0.0) {
    throw Error(ErrorCode::invalid_argument, "t_end must be >= 0");
  }
  const double h = step_limit(dynamics, dt);
  double m = m0.value_or(dynamics.m_eq(stimulus(0.0), scaling));
  std::vector<TracePoint> out{{0.0, stimulus(0.0), m}};
  const double T = stimulus.period();
  for (long k = 0; k * T < t_end; ++k) {
    const double stop = std::min(T, t_end - k * T);
    m = advance_period(stimulus, dynamics, scaling, m, k * T, stop, h,
                       [&](const Sample& s) { out.push_back({s.t, s.mu, s.m}); });
  }
  return out;
}

CyclicInformation cyclic_information(const StimulusLoop& loop, const ConstitutiveScaling& scaling,
                                     const NoiseModel& noise) {
  noise.validate();
  CyclicInformation out;
  const auto pts = loop.points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const LoopPoint a = pts[i], b = pts[i + 1];
    const double dm = b.m - a.m;
    if (dm == 0.0) continue;
    auto f = [&](double s) {
      const double mu = a.mu + s * (b.mu - a.mu);
      const double m = a.m + s * dm;
      const double s2 = scaling.sigma2(mu);
      if (s2 == 0.0) return 0.0;
      return s2 / (m * 2.0 * (s2 + m * noise.sigma_r2)) * dm;
    };
    out.line_integral += quad::integrate(f, 0.0, 1.0, 1e-12, 20, 1e-13);
  }

  if (loop.is_point_like()) {
    out.simple = false;
    return out;
  }
  out.simple = loop.is_simple();
  if (!out.simple) return out;

  const auto ring = loop.ring();
  const double sign = geom::signed_area(ring) >= 0.0 ? 1.0 : -1.0;
  auto integrand = [&](double mu, double m) { return -mixed_derivative(mu, m, scaling, noise); };
  double area = 0.0;
  for (const auto& tri : geom::triangulate(ring)) {
    area += quad::integrate_triangle(integrand, tri[0], tri[1], tri[2], 1e-13, 1e-10);
  }
  out.area_integral = sign * area;
  return out;
}

SecondLawVerdict second_law_check(const StimulusLoop& loop, const ConstitutiveScaling& scaling,
                                  const NoiseModel& noise) {
  if (!scaling.monotone()) {
    std::ostringstream os;
    os << "scaling sigma2 = " << scaling.c << " mu^" << scaling.p
       << " is not non-decreasing; the cyclic inequality does not apply";
    throw Error(ErrorCode::precondition_violation, os.str());
  }
  SecondLawVerdict v;
  if (loop.is_point_like()) {
    v.cyclic_info = cyclic_information(loop, scaling, noise).line_integral;
    v.holds = std::abs(v.cyclic_info) <= 1e-9;
    v.note = "loop encloses no area";
    return v;
  }
  if (!loop.is_simple()) {
    throw Error(ErrorCode::precondition_violation,
                "loop is self-intersecting; the cyclic inequality covers simple loops only");
  }
  const CyclicInformation ci = cyclic_information(loop, scaling, noise);
  v.cyclic_info = ci.line_integral;
  v.area_integral = ci.area_integral;
  v.orientation = loop.orientation() == Orientation::counterclockwise ? 1 : -1;
  v.reversed = v.orientation < 0;
  v.holds = v.orientation * v.cyclic_info >= -1e-9;
  if (v.reversed) {
    v.note = "clockwise traversal: the inequality applies to the reversed loop, so the sign is flipped";
  }
  return v;
}

}  // namespace infothermo

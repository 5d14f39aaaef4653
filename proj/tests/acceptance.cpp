// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "infothermo/cycle_laws.hpp"
#include "infothermo/error.hpp"
#include "infothermo/monte_carlo.hpp"
#include "infothermo/optimal.hpp"
#include "infothermo/paths.hpp"
#include "infothermo/sensory.hpp"
#include "infothermo/state.hpp"
#include "oracle.hpp"

using namespace infothermo;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    failures += (failures.empty() ? "" : "; ") + what;
    pass = false;
  }
  std::string text() const {
    return failures.empty() ? detail.str() : detail.str() + " -- failed: " + failures;
  }
};

using Check = std::function<void(Outcome&)>;

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  Check check;
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

SamplingDynamics linear(double a) {
  SamplingDynamics d;
  d.rate = a;
  return d;
}

// ---------------------------------------------------------------------------

void state_functions_close(Outcome& o) {
  const auto cycles = random_cycles(20261018, 1000);
  const NoiseModel noise = NoiseModel::mutual_info(1.0);
  double worst = 0.0, max_work = 0.0;
  for (const auto& c : cycles) {
    const ClosureReport r = cycle_closure_check(c, noise);
    worst = std::max({worst, std::abs(r.dh_loop), std::abs(r.dsigma2_loop), std::abs(r.dtheta_loop)});
    max_work = std::max(max_work, std::abs(r.sampling_work));
  }
  o.detail << "worst closure " << worst << ", largest |work| " << max_work;
  o.require(worst < 1e-9, "closure >= 1e-9");
  o.require(max_work > 0.1, "no cycle with |work| > 0.1");
}

void first_law(Outcome& o) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> um(0.5, 100.0), us(0.0, 50.0), ur(0.1, 2.0);
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k < 100; ++k) {
    const NoiseModel noise = NoiseModel::mutual_info(ur(rng));
    const ProcessPath seg({{um(rng), us(rng)}, {um(rng), us(rng)}});
    // Halvings past the pre-asymptotic range of wide segments.
    for (int n : {64, 128}) {
      const double ratio = first_law_residual(seg, noise, n) / first_law_residual(seg, noise, 2 * n);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  double worst = 0.0;
  for (const auto& c : random_cycles(20261018, 1000)) {
    const ClosureReport r = cycle_closure_check(c, NoiseModel::mutual_info(1.0));
    worst = std::max(worst, std::abs(r.theta_dh_loop + r.sampling_work));
  }
  o.detail << "halving ratios in [" << lo << ", " << hi << "], worst |loop theta dH + work| " << worst;
  o.require(lo >= 3.5 && hi <= 4.5, "ratio outside [3.5, 4.5]");
  o.require(worst <= 1e-8, "loop identity off by more than 1e-8");
}

void rectangle_work(Outcome& o) {
  const double e2 = std::exp(2.0);
  // Up at m_a, across at sigma_b, down at m_b, back at sigma_a.
  const CyclePath c(ProcessPath({{1.0, 1.0}, {1.0, 3.0}, {e2, 3.0}, {e2, 1.0}, {1.0, 1.0}}));
  const double w = sampling_work(c.path());
  o.detail << "work " << w;
  o.require(c.orientation() == Orientation::clockwise, "not clockwise");
  o.require(std::abs(w - 4.0) <= 1e-9, "work differs from 4 by more than 1e-9");
}

void optimal_trajectory(Outcome& o) {
  const NoiseModel unit = NoiseModel::mutual_info(1.0);
  const BudgetProblem p{1.0, 4.0, 1.0, unit};
  const OptimalTrajectory t = solve_optimal(p);
  double shape = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double m = 1.0 + 3.0 * i / 300.0;
    shape = std::max(shape, std::abs(t.sigma2(m) - (2.0 * std::sqrt(m) - m)));
  }
  const double gain = optimal_info_gain(p);
  const double closed = std::log(2.0) - 0.5;

  DpOptions dp;
  dp.m_grid_size = dp.sigma_grid_size = dp.budget_grid_size = 64;
  const DpResult r = dp_oracle(p, dp);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> us(0.1, 10.0);
  double best_random = -INFINITY;
  for (int k = 0; k < 100; ++k) {
    auto nodes = oracle::random_monotone_nodes(rng, 1.0, 4.0, 2 + k % 30, us(rng));
    const double w = oracle::path_work(nodes);
    if (!(w > 0.0)) continue;
    for (auto& n : nodes) n.sigma2 *= p.work_budget / w;
    best_random = std::max(best_random, information_gain(ProcessPath(nodes), unit));
  }
  o.detail << "max |sigma2 - (2 sqrt m - m)| " << shape << ", gain " << gain << " vs "
           << closed << ", dp " << r.best_gain << ", best random " << best_random;
  o.require(shape <= 1e-12, "trajectory shape");
  o.require(std::abs(gain - closed) <= 1e-9, "gain");
  o.require(std::abs(gain - r.best_gain) <= 5e-3, "dp oracle gap > 5e-3");
  o.require(best_random <= gain + 1e-9, "random path beats optimum");
}

void capacity_bound(Outcome& o) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> us(1e-3, 1e4), ur(0.01, 10.0);
  std::uniform_int_distribution<int> un(2, 40);
  double worst = -INFINITY;
  for (int k = 0; k < 1000; ++k) {
    const auto nodes = oracle::random_monotone_nodes(rng, 1.0, 4.0, un(rng), us(rng));
    worst = std::max(worst, information_gain(ProcessPath(nodes), NoiseModel::mutual_info(ur(rng))));
  }
  o.detail << "largest gain " << worst << " vs log 2 = " << std::log(2.0);
  o.require(worst <= std::log(2.0) + 1e-9, "gain exceeds log 2");
}

void second_law(Outcome& o) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> uc(0.01, 10.0), up(0.0, 3.0), ur(0.01, 10.0);
  const geom::Box box{0.05, 10.0, 0.1, 50.0};
  const geom::Shape shapes[] = {geom::Shape::rectangle, geom::Shape::convex_polygon,
                                geom::Shape::ellipse, geom::Shape::star};
  double min_ci = INFINITY, worst_green = 0.0, worst_zero = 0.0;
  int failures = 0;
  for (int k = 0; k < 500; ++k) {
    const ConstitutiveScaling s{uc(rng), up(rng)};
    const geom::Shape shape = shapes[k % 4];
    const StimulusLoop loop = loop_from_ring(geom::random_ring(rng, shape, box));
    const NoiseModel noise = NoiseModel::mutual_info(ur(rng));
    const SecondLawVerdict v = second_law_check(loop, s, noise);
    failures += !(v.holds && v.orientation == 1);
    min_ci = std::min(min_ci, v.cyclic_info);
    if (shape != geom::Shape::star) {
      const CyclicInformation ci = cyclic_information(loop, s, noise);
      if (!ci.area_integral) {
        ++failures;
      } else {
        const double d = std::abs(*ci.area_integral - ci.line_integral);
        worst_green = std::max(worst_green, d / std::max(std::abs(ci.line_integral), 1e-8));
      }
    }
    const double zero = cyclic_information(loop, s, NoiseModel::raw(0.0, 0.0)).line_integral;
    worst_zero = std::max(worst_zero, std::abs(zero));
  }
  o.detail << "min cyclic info " << min_ci << ", worst Green relative gap " << worst_green
           << ", worst |zero-noise loop| " << worst_zero;
  o.require(failures == 0 && min_ci >= -1e-9, "loop with negative cyclic information");
  o.require(worst_green <= 1e-4, "area and line integrals disagree");
  o.require(worst_zero <= 1e-9, "zero-noise loop not zero");
}

void driven_loops(Outcome& o) {
  const ConstitutiveScaling s{1.0, 2.0};
  const NoiseModel unit = NoiseModel::mutual_info(1.0);
  const Waveform w = Waveform::trapezoid(1.0, 3.0, 1.0, 10.0, 1.0, 10.0);
  const StimulusLoop base = simulate_driven_cycle(w, linear(1.0), s, 110.0, 0.01);
  const SecondLawVerdict v = second_law_check(base, s, unit);
  o.require(base.orientation() == Orientation::counterclockwise, "loop not counterclockwise");
  o.require(v.holds && v.cyclic_info >= 0.0, "negative cyclic information");
  o.detail << "a=1 cyclic info " << v.cyclic_info << "; areas";
  double prev = INFINITY;
  for (double a : {1.0, 10.0, 100.0}) {
    const double area = simulate_driven_cycle(w, linear(a), s, 110.0, 0.01).signed_area();
    o.detail << ' ' << area;
    o.require(area < prev, "area not shrinking at a=" + std::to_string(a));
    prev = area;
  }
}

void adaptation_inequality(Outcome& o) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> li(std::log(1e-3), std::log(1e2));
  int held = 0;
  for (int k = 0; k < 10000; ++k) {
    const AdaptationParams p = random_params(rng);
    const FixedPoints f = fixed_points(std::exp(li(rng)), p);
    held += universal_inequality_check({"u", f.sr, f.pr, f.ss}).holds();
  }
  const AdaptationParams ref{2.0, 1.0, 2.0, 1.0, 1.0};
  const FixedPoints f = fixed_points(3.0, ref);
  const double balance = cycle_balance(3.0, ref);
  const oracle::Rates r = oracle::sensory_rates(2.0, 1.0, 2.0, 1.0, 3.0);
  const double ref_balance = (r.pr - r.ss) + (r.tr - r.sr);
  double worst = std::max({std::abs(f.sr - r.sr), std::abs(f.pr - r.pr), std::abs(f.ss - r.ss),
                           std::abs(f.tr - r.tr), std::abs(balance - ref_balance)});
  worst = std::max({worst, std::abs(f.sr - 0.6931), std::abs(f.pr - 2.8332),
                    std::abs(f.ss - 1.6094), std::abs(f.tr - 0.2231), std::abs(balance - 0.7538)});
  o.detail << held << "/10000 hold; SR " << f.sr << " PR " << f.pr << " SS " << f.ss << " TR "
           << f.tr << " balance " << balance;
  o.require(held == 10000, "inequality violated");
  o.require(worst <= 1e-4 && balance >= 0.0, "worked point");
}

void slope_half(Outcome& o) {
  std::vector<AdaptationTriple> exact;
  for (int j = 0; j < 12; ++j) {
    const double pr = std::pow(2.0, j * 0.75);
    exact.push_back({"u", 0.7, pr, std::sqrt(pr * 0.7)});
  }
  const SlopeFit e = loglog_slope(exact);
  const AdaptationParams ref{2.0, 1.0, 2.0, 1.0, 1.0};
  std::vector<AdaptationTriple> model;
  for (int j = 0; j < 20; ++j) {
    const FixedPoints f = fixed_points(0.01 * std::pow(100.0, j / 19.0), ref);
    model.push_back({"u", f.sr, f.pr, f.ss});
  }
  const SlopeFit m = loglog_slope(model);
  o.detail << "power law slope " << e.slope << " r " << e.r << "; model slope " << m.slope;
  o.require(std::abs(e.slope - 0.5) <= 1e-10 && std::abs(e.r - 1.0) <= 1e-10, "power law");
  o.require(m.slope >= 0.4 && m.slope <= 0.6, "model slope outside [0.4, 0.6]");
}

void monte_carlo(Outcome& o) {
  SamplingSpec g = SamplingSpec::gaussian(0.0, 2.0, 100, 0.5);
  g.trials = 10000;
  g.seed = 101;
  const EntropyValidation vg = validate_entropy_formula(g, NoiseModel::mutual_info(0.5));
  SamplingSpec p = SamplingSpec::poisson(10.0, 400, 0.1);
  p.trials = 10000;
  p.seed = 102;
  const EntropyValidation vp = validate_entropy_formula(p, NoiseModel::mutual_info(0.1));
  bool ratios_ok = true;
  o.detail << "gaussian gap " << vg.gap << ", poisson gap " << vp.gap << ", ratios";
  const std::vector<std::int64_t> ms{10, 100, 1000};
  for (SamplingSpec base : {SamplingSpec::gaussian(0.0, 1.0, 1), SamplingSpec::poisson(4.0, 1)}) {
    base.trials = 10000;
    base.seed = 103;
    for (const auto& r : validate_variance_scaling(base, ms).ratios) {
      o.detail << ' ' << r.ratio;
      ratios_ok = ratios_ok && r.ratio >= 0.9 && r.ratio <= 1.1;
    }
  }
  o.require(vg.gap <= 0.02, "gaussian gap > 0.02");
  o.require(vp.gap <= 0.03, "poisson gap > 0.03");
  o.require(ratios_ok, "variance ratio outside [0.9, 1.1]");
}

void partial_derivatives(Outcome& o) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lm(std::log(0.1), std::log(1e3)),
      ls(std::log(1e-2), std::log(1e2)), lr(std::log(1e-2), std::log(10.0));
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double m = std::exp(lm(rng)), s = std::exp(ls(rng)), r = std::exp(lr(rng));
    const Partials a = partials({m, s}, NoiseModel::mutual_info(r));
    const double hm = 1e-5 * m, hs = 1e-5 * s;
    const double dh_ds = (oracle::h_mi(m, s + hs, r) - oracle::h_mi(m, s - hs, r)) / (2 * hs);
    const double dh_dm = (oracle::h_mi(m + hm, s, r) - oracle::h_mi(m - hm, s, r)) / (2 * hm);
    // Along a level set of H: d sigma2 / dm = -H_m / H_s.
    const double ds_dm = -dh_dm / dh_ds;
    const double dth_dm = (oracle::theta(m + hm, s + ds_dm * hm, r) -
                           oracle::theta(m - hm, s - ds_dm * hm, r)) / (2 * hm);
    worst = std::max({worst, rel_err(a.dh_dsigma2_at_m, dh_ds), rel_err(a.dh_dm_at_sigma2, dh_dm),
                      rel_err(a.dsigma2_dm_at_h, ds_dm), rel_err(a.dtheta_dm_at_h, dth_dm)});
  }
  const double ds_dth = 1.0 / ((oracle::theta(2.0, 3.0 + 1e-3, 0.7) -
                                oracle::theta(2.0, 3.0 - 1e-3, 0.7)) / 2e-3);
  o.detail << "worst relative error " << worst << ", specific heat " << quasi_specific_heat();
  o.require(worst < 1e-6, "finite differences disagree");
  o.require(quasi_specific_heat() == 0.5 && std::abs(ds_dth - 0.5) < 1e-12, "specific heat");
}

void efficiency_and_bound(Outcome& o) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> lm(std::log(0.1), std::log(1e3)),
      ls(std::log(1e-6), std::log(1e3)), lr(std::log(1e-2), std::log(10.0)), u(0.0, 1.0);
  bool eta_ok = true;
  double worst_mmse = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double m = std::exp(lm(rng)), s = std::exp(ls(rng));
    const NoiseModel n = NoiseModel::mutual_info(std::exp(lr(rng)));
    const double eta = efficiency({m, s}, n);
    eta_ok = eta_ok && eta > 0.0 && eta < 1.0 && efficiency({m, 0.0}, n) == 1.0;
    worst_mmse = std::max(worst_mmse, rel_err(mmse({m, s}, n), eta * s / m));
  }

  // Loops with a zero-variance leg: out along sigma2 = 0, back at sigma2 > 0.
  // (sigma2/m) dm is then never positive.
  int checked = 0, held = 0;
  double worst_margin = INFINITY;
  for (int k = 0; k < 300; ++k) {
    const NoiseModel n = NoiseModel::mutual_info(std::exp(lr(rng)));
    const double m1 = std::exp(lm(rng)) / 2.0, m2 = m1 * (1.1 + 20.0 * u(rng));
    std::vector<PathNode> nodes{{m1, 0.0}, {m2, 0.0}};
    const int inner = 1 + k % 8;
    for (int i = 0; i <= inner; ++i) {
      const double m = i == inner ? m1 : m2 + (m1 - m2) * i / inner;
      nodes.push_back({m, 100.0 * u(rng) + 1e-3});
    }
    nodes.push_back({m1, 0.0});
    const EfficiencyBound b = global_efficiency_bound(CyclePath(ProcessPath(nodes)), n);
    ++checked;
    held += b.sign_definite && b.holds;
    worst_margin = std::min(worst_margin, b.bound - b.ratio);
  }
  // Random cycles whose work measure happens to be sign-definite.
  for (const auto& c : random_cycles(77, 500)) {
    try {
      const EfficiencyBound b = global_efficiency_bound(c, NoiseModel::mutual_info(0.5));
      if (!b.sign_definite) continue;
      ++checked;
      held += b.holds;
      worst_margin = std::min(worst_margin, b.bound - b.ratio);
    } catch (const Error&) {
    }
  }
  o.detail << "worst MMSE relative error " << worst_mmse << ", bound held on " << held << '/'
           << checked << " cycles, smallest margin " << worst_margin;
  o.require(eta_ok, "efficiency outside (0, 1) or not 1 at sigma2 = 0");
  o.require(worst_mmse <= 1e-12, "MMSE identity");
  o.require(held == checked && checked > 0, "efficiency bound violated");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "state functions close around random cycles", 10.0, state_functions_close},
      {2, "first law second-order residual and loop identity", 0.0, first_law},
      {3, "rectangular cycle work", 0.0, rectangle_work},
      {4, "optimal trajectory, gain and dp oracle", 60.0, optimal_trajectory},
      {5, "information bound on monotone paths", 0.0, capacity_bound},
      {6, "cyclic information of positive loops", 0.0, second_law},
      {7, "driven sensory loops", 0.0, driven_loops},
      {8, "adaptation inequality and worked point", 0.0, adaptation_inequality},
      {9, "log-log slope of one half", 0.0, slope_half},
      {10, "Monte Carlo entropy and variance scaling", 120.0, monte_carlo},
      {11, "partial derivatives against finite differences", 0.0, partial_derivatives},
      {12, "efficiency, MMSE and global bound", 0.0, efficiency_and_bound},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.check(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0) {
      o.require(secs < c.time_limit, "runtime over " + std::to_string(c.time_limit) + " s");
    }
    failed += !o.pass;
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.text().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

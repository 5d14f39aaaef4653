#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "infothermo/optimal.hpp"
#include "infothermo/paths.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace infothermo;

namespace {

const NoiseModel kUnit = NoiseModel::mutual_info(1.0);
const double kE2 = std::exp(2.0);

CyclePath rectangle(double m1, double m2, double s1, double s2) {
  return CyclePath(ProcessPath({{m1, s1}, {m2, s1}, {m2, s2}, {m1, s2}, {m1, s1}}));
}

}  // namespace

TEST(ProcessPath, Validation) {
  EXPECT_ERROR_CODE(ProcessPath({{1.0, 1.0}}), ErrorCode::invalid_argument);
  EXPECT_ERROR_CODE(ProcessPath({{1.0, 1.0}, {1.0, 1.0}}), ErrorCode::invalid_argument);
  EXPECT_ERROR_CODE(ProcessPath({{1.0, 1.0}, {-1.0, 1.0}}), ErrorCode::invalid_argument);
  EXPECT_ERROR_CODE(CyclePath(ProcessPath({{1.0, 1.0}, {2.0, 1.0}})), ErrorCode::not_a_cycle);
}

TEST(SamplingWork, ConstantVariance) {
  const ProcessPath p({{1.0, 2.0}, {std::exp(1.0), 2.0}, {2.0, 2.0}});
  EXPECT_NEAR(sampling_work(p), 2.0 * std::log(2.0), 1e-12);
}

TEST(SamplingWork, IsochoricIsZero) {
  EXPECT_EQ(sampling_work(ProcessPath({{3.0, 1.0}, {3.0, 5.0}, {3.0, 0.0}})), 0.0);
}

TEST(SamplingWork, RectangularCycle) {
  // Counterclockwise in (m, sigma2): up the right side, down the left side.
  const CyclePath ccw(ProcessPath({{1.0, 1.0}, {kE2, 1.0}, {kE2, 3.0}, {1.0, 3.0}, {1.0, 1.0}}));
  EXPECT_NEAR(sampling_work(ccw.path()), -4.0, 1e-9);
  EXPECT_NEAR(sampling_work(ccw.path().reversed()), 4.0, 1e-9);
}

TEST(SamplingWork, MatchesClosedFormOnRandomPaths) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 200; ++k) {
    const auto nodes = oracle::random_monotone_nodes(rng, 0.5, 500.0, 7, 50.0);
    const ProcessPath p(nodes);
    EXPECT_TRUE(RelNear(sampling_work(p), oracle::path_work(nodes), 1e-10));
    EXPECT_TRUE(RelNear(information_gain(p, kUnit), oracle::path_info(nodes, 1.0), 1e-9));
  }
}

TEST(InformationGain, Cases) {
  EXPECT_EQ(information_gain(ProcessPath({{1.0, 0.0}, {5.0, 0.0}}), kUnit), 0.0);
  const NoiseModel zero = NoiseModel::raw(0.0, 0.0);
  EXPECT_NEAR(information_gain(ProcessPath({{2.0, 3.0}, {9.0, 3.0}}), zero),
              0.5 * std::log(4.5), 1e-12);
}

TEST(InformationGain, OptimalTrajectoryGain) {
  const BudgetProblem prob{1.0, 4.0, 1.0, kUnit};
  const ProcessPath path = solve_optimal(prob).to_path(4001);
  // Chord error of the piecewise-linear sampling is O(h^2).
  EXPECT_NEAR(information_gain(path, kUnit), std::log(2.0) - 0.5, 1e-6);
  EXPECT_NEAR(information_gain(path, kUnit), oracle::path_info(path.nodes(), 1.0), 1e-9);
}

TEST(ReversibleFlux, Cases) {
  EXPECT_EQ(reversible_entropy_flux(ProcessPath({{1.0, 2.0}, {4.0, 2.0}}), kUnit), 0.0);
  // Isothermal: theta fixed at 2 (1 + 1) = 4.
  const ProcessPath iso = make_process(ProcessKind::isothermal, {1.0, 1.0}, 2.0, kUnit);
  EXPECT_NEAR(reversible_entropy_flux(iso, kUnit), -1.0 / 4.0, 1e-12);
}

TEST(ReversibleFlux, DecomposesEntropyChange) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> um(0.5, 100.0), us(0.0, 30.0);
  const NoiseModel n = NoiseModel::mutual_info(0.7);
  for (int k = 0; k < 200; ++k) {
    std::vector<PathNode> nodes;
    for (int i = 0; i < 6; ++i) nodes.push_back({um(rng), us(rng)});
    const ProcessPath p(nodes);
    const double dh = oracle::h_mi(nodes.back().m, nodes.back().sigma2, 0.7) -
                      oracle::h_mi(nodes.front().m, nodes.front().sigma2, 0.7);
    EXPECT_NEAR(reversible_entropy_flux(p, n) - information_gain(p, n), dh, 1e-8);
  }
}

TEST(FirstLaw, StationaryPathHasNoResidual) {
  EXPECT_EQ(first_law_residual(ProcessPath::stationary({2.0, 1.0}), kUnit, 8), 0.0);
}

TEST(FirstLaw, SecondOrderOnStraightSegment) {
  const ProcessPath seg({{1.0, 1.0}, {4.0, 2.0}});
  for (int n : {4, 8, 16, 32}) {
    const double ratio = first_law_residual(seg, kUnit, n) / first_law_residual(seg, kUnit, 2 * n);
    EXPECT_GE(ratio, 3.5) << n;
    EXPECT_LE(ratio, 4.5) << n;
  }
  const double r3 = first_law_max_step_residual(seg, kUnit, 128) /
                    first_law_max_step_residual(seg, kUnit, 256);
  EXPECT_NEAR(r3, 8.0, 0.6);
}

// sigma2/m is constant and dH vanishes, so the midpoint rule is exact.
TEST(FirstLaw, AdiabaticResidualVanishes) {
  const ProcessPath ad = make_process(ProcessKind::adiabatic, {1.0, 2.0}, 5.0, kUnit);
  EXPECT_LT(first_law_residual(ad, kUnit, 64), 1e-12);
}

TEST(MakeProcess, Canonical) {
  const ProcessPath ad = make_process(ProcessKind::adiabatic, {1.0, 1.0}, 4.0, kUnit, 5);
  EXPECT_DOUBLE_EQ(ad.back().sigma2, 4.0);
  EXPECT_NEAR(entropy(ad.back(), kUnit) - entropy(ad.front(), kUnit), 0.0, 1e-12);
  EXPECT_EQ(ad.nodes().size(), 5u);

  const ProcessPath iso = make_process(ProcessKind::isothermal, {1.0, 1.0}, 2.0, kUnit);
  EXPECT_EQ(iso.back().sigma2, 0.0);
  EXPECT_NEAR(theta(iso.back(), kUnit) - theta(iso.front(), kUnit), 0.0, 1e-12);

  EXPECT_ERROR_CODE(make_process(ProcessKind::isothermal, {1.0, 1.0}, 3.0, kUnit),
                    ErrorCode::infeasible_process);

  const ProcessPath ch = make_process(ProcessKind::isochoric, {2.0, 1.0}, 5.0, kUnit);
  EXPECT_EQ(ch.back().m, 2.0);
  EXPECT_EQ(ch.back().sigma2, 5.0);
}

TEST(CycleClosure, Rectangle) {
  const CyclePath c = rectangle(1.0, kE2, 1.0, 3.0);
  const ClosureReport r = cycle_closure_check(c, kUnit);
  EXPECT_LT(std::abs(r.dsigma2_loop), 1e-12);
  EXPECT_LT(std::abs(r.dh_loop), 1e-12);
  EXPECT_LT(std::abs(r.dtheta_loop), 1e-12);
  EXPECT_NEAR(r.sampling_work, -4.0, 1e-9);
  EXPECT_NEAR(r.theta_dh_loop, 4.0, 1e-8);
  EXPECT_GT(r.signed_area, 0.0);
}

TEST(CycleClosure, DegenerateTwoPointCycle) {
  const CyclePath c(ProcessPath({{1.0, 1.0}, {2.0, 1.0}, {1.0, 1.0}}));
  const ClosureReport r = cycle_closure_check(c, kUnit);
  EXPECT_NEAR(r.dh_loop, 0.0, 1e-15);
  EXPECT_NEAR(r.dsigma2_loop, 0.0, 1e-15);
  EXPECT_NEAR(r.dtheta_loop, 0.0, 1e-15);
  EXPECT_NEAR(r.sampling_work, 0.0, 1e-12);
  EXPECT_NEAR(r.information_gain, 0.0, 1e-12);
  EXPECT_EQ(c.orientation(), Orientation::degenerate);
}

TEST(CycleClosure, RandomCyclesAreExact) {
  const auto cycles = random_cycles(99, 200);
  for (const auto& c : cycles) {
    const ClosureReport r = cycle_closure_check(c, NoiseModel::mutual_info(0.3));
    EXPECT_LT(std::abs(r.dh_loop), 1e-9);
    EXPECT_LT(std::abs(r.dsigma2_loop), 1e-9);
    EXPECT_LT(std::abs(r.dtheta_loop), 1e-9);
    EXPECT_NEAR(r.theta_dh_loop, -r.sampling_work, 1e-8);
    EXPECT_TRUE(RelNear(r.sampling_work, oracle::path_work(c.path().nodes()), 1e-9) ||
                std::abs(r.sampling_work) < 1e-9);
  }
}

TEST(InformationGain, MonotonePathsRespectBound) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 300; ++k) {
    const auto nodes = oracle::random_monotone_nodes(rng, 2.0, 50.0, 9, 1e3);
    EXPECT_LE(information_gain(ProcessPath(nodes), kUnit), 0.5 * std::log(25.0) + 1e-9);
  }
}

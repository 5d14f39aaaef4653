#include <benchmark/benchmark.h>

#include <random>

#include "infothermo/cycle_laws.hpp"
#include "infothermo/monte_carlo.hpp"
#include "infothermo/optimal.hpp"
#include "infothermo/paths.hpp"
#include "infothermo/sensory.hpp"
#include "infothermo/state.hpp"

using namespace infothermo;

static void BM_Entropy(benchmark::State& state) {
  const NoiseModel n = NoiseModel::mutual_info(1.0);
  double m = 4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy({m, 4.0}, n));
    m += 1e-9;
  }
}
BENCHMARK(BM_Entropy);

static void BM_CycleClosure(benchmark::State& state) {
  const auto cycles = random_cycles(1, 64);
  const NoiseModel n = NoiseModel::mutual_info(1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cycle_closure_check(cycles[i++ % cycles.size()], n));
  }
}
BENCHMARK(BM_CycleClosure);

static void BM_DpOracle(benchmark::State& state) {
  const BudgetProblem p{1.0, 4.0, 1.0, NoiseModel::mutual_info(1.0)};
  DpOptions o;
  o.m_grid_size = o.sigma_grid_size = o.budget_grid_size = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dp_oracle(p, o).best_gain);
}
BENCHMARK(BM_DpOracle)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_DrivenCycle(benchmark::State& state) {
  const ConstitutiveScaling s{1.0, 2.0};
  const Waveform w = Waveform::trapezoid(1.0, 3.0, 1.0, 10.0, 1.0, 10.0);
  SamplingDynamics d;
  d.rate = static_cast<double>(state.range(0));
  for (auto _ : state) {
    const StimulusLoop l = simulate_driven_cycle(w, d, s, 110.0, 0.01);
    benchmark::DoNotOptimize(cyclic_information(l, s, NoiseModel::mutual_info(1.0)).line_integral);
  }
}
BENCHMARK(BM_DrivenCycle)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_FixedPoints(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const AdaptationParams p = random_params(rng);
  double i = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fixed_points(i, p));
    i += 1e-9;
  }
}
BENCHMARK(BM_FixedPoints);

static void BM_SimulateEstimator(benchmark::State& state) {
  SamplingSpec s = SamplingSpec::poisson(10.0, 400, 0.1);
  s.trials = 10000;
  s.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_estimator(s));
}
BENCHMARK(BM_SimulateEstimator)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cmath>

#include "asekit/ase_optimizer.hpp"
#include "asekit/energy_planner.hpp"
#include "asekit/mc_sim.hpp"
#include "asekit/numerics.hpp"
#include "asekit/rate_model.hpp"

using namespace asekit;

static void BM_SemiInfiniteQuadrature(benchmark::State& state) {
  const auto f = [](double z) { return std::exp(-z) / (1.0 + z * z); };
  for (auto _ : state) benchmark::DoNotOptimize(numerics::integrate_semi_infinite(f).value);
}
BENCHMARK(BM_SemiInfiniteQuadrature);

static void BM_IncompleteBeta(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::incomplete_beta(x, 0.5, 6.5));
    x = x < 0.9 ? x + 0.01 : 0.1;
  }
}
BENCHMARK(BM_IncompleteBeta);

static void BM_MeanRateExact(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mean_rate_exact(m, m / 2, 4.0).mean_rate);
}
BENCHMARK(BM_MeanRateExact)->Arg(8)->Arg(32)->Arg(128);

static void BM_MeanRateLowerBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mean_rate_lower_bound(32, 19, 4.0).mean_rate);
}
BENCHMARK(BM_MeanRateLowerBound);

static void BM_SolveOptimalUserFraction(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_optimal_user_fraction(4.0).u_star);
}
BENCHMARK(BM_SolveOptimalUserFraction)->Unit(benchmark::kMillisecond);

// One K step of the exhaustive planner.
static void BM_OptimalMGivenK(benchmark::State& state) {
  const auto macro = builtin_profile("macro");
  for (auto _ : state) benchmark::DoNotOptimize(optimal_m_given_k(macro, 6, 4.0));
}
BENCHMARK(BM_OptimalMGivenK)->Unit(benchmark::kMillisecond);

static void BM_FullZfTrials(benchmark::State& state) {
  sim::SimulationConfig cfg;
  cfg.antennas = static_cast<int>(state.range(0));
  cfg.users = static_cast<int>(state.range(1));
  cfg.trials = 100;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sim::estimate_mean_rate(cfg).mean_rate);
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_FullZfTrials)->Args({4, 2})->Args({8, 4})->Args({12, 6})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "stackedge/economics.hpp"
#include "stackedge/equilibrium.hpp"
#include "stackedge/experiments.hpp"
#include "stackedge/pricing_discriminatory.hpp"
#include "stackedge/pricing_uniform.hpp"
#include "stackedge/rng.hpp"

namespace {

using namespace stackedge;

std::vector<MinerProfile> bench_profiles(int n) {
  Rng rng(1234);
  return sample_profiles(n, 200.0, 5.0, rng);
}

void BM_SolveMdg(benchmark::State& state) {
  const MarketParams params = MarketParams::defaults();
  const int n = static_cast<int>(state.range(0));
  const auto profiles = bench_profiles(n);
  const PriceSchedule prices = PriceSchedule::uniform(n, params.price_cap);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_mdg(profiles, prices, params));
  }
}
BENCHMARK(BM_SolveMdg)->Arg(2)->Arg(10)->Arg(100);

void BM_ClosedForm(benchmark::State& state) {
  const MarketParams params = MarketParams::defaults();
  const int n = static_cast<int>(state.range(0));
  const auto profiles = bench_profiles(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        closed_form_uniform(profiles, params.price_cap, params));
  }
}
BENCHMARK(BM_ClosedForm)->Arg(10)->Arg(100)->Arg(1000);

void BM_ProfitGradient(benchmark::State& state) {
  const MarketParams params = MarketParams::defaults();
  const int n = static_cast<int>(state.range(0));
  const auto profiles = bench_profiles(n);
  const PriceSchedule prices = PriceSchedule::uniform(n, 80.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(profit_gradient(prices, profiles, params));
  }
}
BENCHMARK(BM_ProfitGradient)->Arg(10)->Arg(100)->Arg(1000);

void BM_OptimizeUniform(benchmark::State& state) {
  const MarketParams params = MarketParams::defaults();
  const auto profiles = bench_profiles(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_uniform(profiles, params));
  }
}
BENCHMARK(BM_OptimizeUniform)->Arg(20)->Arg(100);

void BM_OptimizeDiscriminatory(benchmark::State& state) {
  const MarketParams params = MarketParams::defaults();
  const auto profiles = bench_profiles(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_discriminatory(profiles, params));
  }
}
BENCHMARK(BM_OptimizeDiscriminatory)->Arg(20)->Arg(100);

void BM_MiningRace(benchmark::State& state) {
  const MarketParams params = MarketParams::defaults();
  const int n = 10;
  const auto profiles = bench_profiles(n);
  DemandProfile x;
  x.demands.assign(n, 5.0);
  const std::int64_t trials = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_mining_race(x, profiles, params, trials, 7));
  }
  state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(BM_MiningRace)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();

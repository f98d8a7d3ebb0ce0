#include <benchmark/benchmark.h>

#include "exdyn/ar1.hpp"
#include "exdyn/geometry.hpp"
#include "exdyn/harness.hpp"
#include "exdyn/model.hpp"

namespace {

exdyn::ModelConfig two_category(double lambda) {
  exdyn::ModelConfig config;
  config.lambda = lambda;
  config.init_means = {0.25, 0.75};
  config.init_weights = {10.0, 10.0};
  config.seed = 42;
  return config;
}

void BM_AdvanceOneDim(benchmark::State& state) {
  exdyn::Simulator sim(two_category(0.05));
  for (auto _ : state) benchmark::DoNotOptimize(sim.advance());
}
BENCHMARK(BM_AdvanceOneDim);

void BM_AdvanceSquareK(benchmark::State& state) {
  exdyn::ModelConfig config;
  config.k = static_cast<std::size_t>(state.range(0));
  config.lambda = 0.05;
  config.domain = exdyn::Domain::square(100.0);
  for (std::size_t j = 0; j < config.k; ++j) {
    config.init_means.push_back(10.0 + 80.0 * static_cast<double>(j) / static_cast<double>(config.k));
    config.init_means.push_back(50.0);
    config.init_weights.push_back(20.0);
  }
  exdyn::Simulator sim(config);
  for (auto _ : state) benchmark::DoNotOptimize(sim.advance());
}
BENCHMARK(BM_AdvanceSquareK)->Arg(4)->Arg(16)->Arg(64);

void BM_CellStats(benchmark::State& state) {
  const std::vector<double> means{0.2, 0.5, 0.8};
  exdyn::Rng rng(7);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        exdyn::cell_stats(means, exdyn::Domain::unit_interval(), state.range(0), rng));
}
BENCHMARK(BM_CellStats)->Arg(1'000)->Arg(100'000);

void BM_ReplicaToEquilibrium(benchmark::State& state) {
  const double lambda = 0.1;
  const std::uint64_t steps[] = {exdyn::equilibrium_steps(lambda)};
  std::size_t r = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        exdyn::replica_boundaries(lambda, steps, exdyn::replica_rng(1, 0, r++)));
}
BENCHMARK(BM_ReplicaToEquilibrium);

void BM_SimulateAr1(benchmark::State& state) {
  exdyn::Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(exdyn::simulate_ar1(0.05, 100'000, rng));
}
BENCHMARK(BM_SimulateAr1);

}  // namespace

BENCHMARK_MAIN();

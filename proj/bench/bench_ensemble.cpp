#include <benchmark/benchmark.h>

#include "geomech/ensemble.hpp"

namespace {

using namespace geomech;

const InertiaTensor kJ = InertiaTensor::diagonal(3, 2, 1);
constexpr long kSteps = 500;

void BM_EnsembleSerial(benchmark::State& state) {
  const auto init = sample_initial_states(static_cast<std::size_t>(state.range(0)), 1, 2.0);
  IntegratorConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ensemble_serial(init, kJ, cfg, kSteps));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * kSteps);
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto init = sample_initial_states(static_cast<std::size_t>(state.range(0)), 1, 2.0);
  IntegratorConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ensemble_parallel(init, kJ, cfg, kSteps));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * kSteps);
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnsembleParallel)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

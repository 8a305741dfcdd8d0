// Serial reference kernels against their OpenMP counterparts.
//
//   ./lps_bench --benchmark_filter=SetS
//
// Thread counts are the benchmark argument; 1 runs the serial reference.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <algorithm>

#include "lps/analysis.hpp"
#include "lps/ensembles.hpp"

namespace {

using namespace lps;

ensembles::Instance instance(Index m, Index n) {
  return ensembles::gen_gaussian_instance({m, n, 2024, std::nullopt, {}});
}

void BM_SetS_Serial(benchmark::State& state) {
  const auto inst = instance(8, 20);
  for (auto _ : state) benchmark::DoNotOptimize(ensembles::is_in_set_s_serial(inst.a, inst.y));
  state.SetItemsProcessed(state.iterations() * 125970);
}

void BM_SetS_Parallel(benchmark::State& state) {
  const auto inst = instance(8, 20);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ensembles::is_in_set_s(inst.a, inst.y, 1e-12, threads));
  }
  state.SetItemsProcessed(state.iterations() * 125970);
}

void BM_Rip_Serial(benchmark::State& state) {
  const auto inst = instance(12, 24);
  for (auto _ : state) benchmark::DoNotOptimize(ensembles::rip_constant_serial(inst.a, 4));
}

void BM_Rip_Parallel(benchmark::State& state) {
  const auto inst = instance(12, 24);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ensembles::rip_constant(inst.a, 4, threads));
}

analysis::ExperimentConfig trial_config() {
  analysis::ExperimentConfig cfg;
  cfg.family = solvers::Family::bp;
  cfg.m = 8;
  cfg.n = 20;
  cfg.p_grid = {1.5, 3.0};
  cfg.trials = 40;
  cfg.master_seed = 7;
  cfg.set_s_max_subsets = 0;  // time the solves, not the minor enumeration
  return cfg;
}

void BM_Trials_Serial(benchmark::State& state) {
  const auto cfg = trial_config();
  for (auto _ : state) benchmark::DoNotOptimize(analysis::run_genericity_experiment_serial(cfg));
  state.SetItemsProcessed(state.iterations() * 80);
}

void BM_Trials_Parallel(benchmark::State& state) {
  const auto cfg = trial_config();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(analysis::run_genericity_experiment(cfg, threads));
  }
  state.SetItemsProcessed(state.iterations() * 80);
}

void thread_counts(benchmark::internal::Benchmark* b) {
  const int max = std::max(4, omp_get_max_threads());
  for (int t = 1; t <= max; t *= 2) b->Arg(t);
  if ((max & (max - 1)) != 0) b->Arg(max);
}

BENCHMARK(BM_SetS_Serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SetS_Parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Rip_Serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Rip_Parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Trials_Serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Trials_Parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();

// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "sosgap/certificate.hpp"
#include "sosgap/estimators.hpp"
#include "support.hpp"

using namespace sosgap;

static void BM_ScanExhaustiveSerial(benchmark::State& state) {
  const auto x = testing::gaussian_matrix(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::scan_exhaustive_reference(x, 5));
}
BENCHMARK(BM_ScanExhaustiveSerial)->Arg(18)->Arg(22)->Unit(benchmark::kMillisecond);

static void BM_ScanExhaustiveParallel(benchmark::State& state) {
  const auto x = testing::gaussian_matrix(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::scan_exhaustive_parallel(x, 5));
}
BENCHMARK(BM_ScanExhaustiveParallel)->Arg(18)->Arg(22)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_ScanBranchAndBound(benchmark::State& state) {
  const auto x = testing::gaussian_matrix(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::scan_branch_and_bound(x, 5));
}
BENCHMARK(BM_ScanBranchAndBound)->Arg(18)->Arg(22)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_ExpansivitySerial(benchmark::State& state) {
  const auto g = testing::random_graph(static_cast<int>(state.range(0)), 0.5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::expansivity_reference(g, 2, {}));
}
BENCHMARK(BM_ExpansivitySerial)->Arg(30)->Arg(45)->Unit(benchmark::kMillisecond);

static void BM_ExpansivityParallel(benchmark::State& state) {
  const auto g = testing::random_graph(static_cast<int>(state.range(0)), 0.5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::expansivity_parallel(g, 2, {}));
}
BENCHMARK(BM_ExpansivityParallel)->Arg(30)->Arg(45)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

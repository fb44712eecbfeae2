// Serial reference vs OpenMP for the parallel kernels.

#include <benchmark/benchmark.h>

#include <cmath>

#include "invbal/analysis.hpp"
#include "invbal/engine.hpp"
#include "invbal/experiments.hpp"
#include "invbal/parallel.hpp"

namespace {

using namespace invbal;

Execution execution(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "omp"); }

void BM_GridArgmin(benchmark::State& state) {
  const std::int64_t n = state.range(1);
  auto g = [n](std::int64_t k) {
    const double x = static_cast<double>(k) / static_cast<double>(n);
    return std::cos(7.0 * x) + std::exp(-x) * std::sin(31.0 * x);
  };
  for (auto _ : state) {
    const kernels::ArgMin m = execution(state) == Execution::Serial ? kernels::grid_argmin_serial(n, g)
                                                                     : kernels::grid_argmin_omp(n, g);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * n);
  label(state);
}
BENCHMARK(BM_GridArgmin)->ArgsProduct({{0, 1}, {1 << 16, 1 << 20}})->Unit(benchmark::kMicrosecond);

void BM_GammaBound(benchmark::State& state) {
  GammaBoundOptions options;
  options.execution = execution(state);
  const Penalty psi = Penalty::exponential();
  for (auto _ : state) benchmark::DoNotOptimize(gamma_bound(psi, 100, 10000, options));
  label(state);
}
BENCHMARK(BM_GammaBound)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  RandomTableOptions o;
  const InstanceFactory factory = random_factory(o, 1.0);
  const auto policies = table_policies(Penalty::exponential(), o.gamma);
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo(factory, policies, static_cast<int>(state.range(1)), 0, execution(state)));
  }
  label(state);
}
BENCHMARK(BM_MonteCarlo)->ArgsProduct({{0, 1}, {8}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "potlab/builders.hpp"
#include "potlab/capacity.hpp"
#include "potlab/criteria.hpp"
#include "potlab/green.hpp"
#include "potlab/smoothing.hpp"
#include "potlab/walk.hpp"

using namespace potlab;

static void BM_LocalGreenZ3(benchmark::State& state) {
  const auto r = static_cast<std::uint32_t>(state.range(0));
  const TruncatedGraph t = lattice(3, r + 1);
  const VertexSet U = ball(t.graph, t.center, r);
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_green(t.graph, U, t.center).values[t.center]);
  }
  state.counters["vertices"] = static_cast<double>(U.size());
}
BENCHMARK(BM_LocalGreenZ3)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_ZdBattery(benchmark::State& state) {
  const auto N = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(zd_battery({2, 3, 4, 5}, {1.25, 1.5, 2.0, 2.5, 3.0}, N).pass);
}
BENCHMARK(BM_ZdBattery)->Arg(1'000)->Arg(10'000)->Unit(benchmark::kMillisecond);

static void BM_HatGraphZ2(benchmark::State& state) {
  const TruncatedGraph t = lattice(2, static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hat_graph(t.graph).vertex_count());
}
BENCHMARK(BM_HatGraphZ2)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_HeatKernelStep(benchmark::State& state) {
  const TruncatedGraph t = lattice(3, 40);
  for (auto _ : state) {
    HeatKernelStream s(t.graph, t.center);
    for (int n = 0; n < 40; ++n) s.advance();
    benchmark::DoNotOptimize(s.current()[t.center]);
  }
}
BENCHMARK(BM_HeatKernelStep)->Unit(benchmark::kMillisecond);

static void BM_CapacityDual(benchmark::State& state) {
  const TruncatedGraph t = lattice(2, 12);
  const CapacityProblem problem{&t.graph, ball(t.graph, t.center, 10), ball(t.graph, t.center, 2),
                                static_cast<double>(state.range(0)) / 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(capacity_dual(problem).value);
}
BENCHMARK(BM_CapacityDual)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

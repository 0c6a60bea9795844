#include <benchmark/benchmark.h>

#include "cantorgap/gap.hpp"
#include "cantorgap/geometry.hpp"
#include "cantorgap/invariants.hpp"
#include "cantorgap/newhouse1d.hpp"
#include "cantorgap/tools/commands.hpp"

using namespace cantorgap;

namespace {

void BM_LargestEmptyDisk(benchmark::State& state) {
  const IfsSpec spec = tools::grid_example(static_cast<unsigned>(state.range(0)), 0.99);
  std::vector<Region> regions;
  for (const auto& p : enumerate_depth(spec, 1, {1, 1})) regions.emplace_back(*p.polygon);
  EmptyDiskOptions o;
  o.pitch = spec.square().side() / 512;
  for (auto _ : state) benchmark::DoNotOptimize(largest_empty_disk(spec.square(), regions, o));
}
BENCHMARK(BM_LargestEmptyDisk)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Report(benchmark::State& state) {
  const IfsSpec spec = tools::grid_example(static_cast<unsigned>(state.range(0)), 0.99);
  ThicknessOptions o;
  o.gap.depth = 1;
  for (auto _ : state) benchmark::DoNotOptimize(thickness(spec, o));
}
BENCHMARK(BM_Report)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const IfsSpec k = tools::grid_example(20, 0.9);
  OracleOptions o;
  o.max_depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(intersect_oracle(k, k, o));
}
BENCHMARK(BM_Oracle)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Tau(benchmark::State& state) {
  const Cantor1D c = middle_alpha(1.0 / 3, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tau(c));
}
BENCHMARK(BM_Tau)->Arg(10)->Arg(16);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "reebfol/families.hpp"
#include "reebfol/foliation.hpp"
#include "reebfol/kernels.hpp"
#include "reebfol/surgery.hpp"

using namespace reebfol;

namespace {

const Profile& half_lutz() {
  static const Profile p = lutz_twist(standard_profile(1.0), TwistKind::Half, 0.5);
  return p;
}

void BM_WronskianGrid(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wronskian_grid_failures(half_lutz(), points));
  state.SetItemsProcessed(state.iterations() * points);
}

void BM_WronskianGridSerial(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wronskian_grid_failures_serial(half_lutz(), points));
  state.SetItemsProcessed(state.iterations() * points);
}

void BM_Foliation(benchmark::State& state) {
  const int density = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_foliation(half_lutz(), 1, 0, density));
}

void BM_FoliationSerial(benchmark::State& state) {
  const int density = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_foliation_serial(half_lutz(), 1, 0, density));
}

}  // namespace

BENCHMARK(BM_WronskianGrid)->Arg(10000)->Arg(1000000);
BENCHMARK(BM_WronskianGridSerial)->Arg(10000)->Arg(1000000);
BENCHMARK(BM_Foliation)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FoliationSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

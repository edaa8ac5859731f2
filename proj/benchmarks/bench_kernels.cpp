#include <benchmark/benchmark.h>

#include "lilfields/maxfun.hpp"
#include "lilfields/scalars.hpp"

using namespace lilfields;

namespace {

ValueGrid random_grid(int d, Coord side, std::uint64_t seed) {
  ValueGrid grid(LatticeIndex::ones(d), std::vector<Coord>(static_cast<std::size_t>(d), side));
  SiteStream stream(seed);
  for (std::int64_t k = 0; k < grid.size(); ++k) grid.flat(k) = stream.next_normal();
  return grid;
}

void BM_PrefixBuild2D(benchmark::State& state) {
  const ValueGrid grid = random_grid(2, state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_prefix_table(grid));
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_PrefixBuild2D)->Arg(64)->Arg(256)->Arg(512);

void BM_PrefixBuild3D(benchmark::State& state) {
  const ValueGrid grid = random_grid(3, state.range(0), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_prefix_table(grid));
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_PrefixBuild3D)->Arg(16)->Arg(64);

void BM_RectSum3D(benchmark::State& state) {
  const ValueGrid grid = random_grid(3, 64, 3);
  const PrefixTable table = build_prefix_table(grid);
  const Rect r(LatticeIndex{5, 9, 2}, LatticeIndex{60, 40, 55});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sum_over_rect(table, r));
  }
}
BENCHMARK(BM_RectSum3D);

void BM_SimulateLinear2D(benchmark::State& state) {
  const LinearModel model(CoefficientField(2, {{LatticeIndex{0, 0}, 1.0},
                                               {LatticeIndex{1, 0}, 0.5},
                                               {LatticeIndex{0, 1}, 0.25},
                                               {LatticeIndex{-1, -1}, 0.125}}),
                          InnovationSpec::standard_normal());
  const Rect block(LatticeIndex::ones(2), LatticeIndex::constant(2, state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_block(model, block, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * block.cardinality());
}
BENCHMARK(BM_SimulateLinear2D)->Arg(64)->Arg(256);

void BM_MaximalRectFull(benchmark::State& state) {
  const ValueGrid grid = random_grid(2, state.range(0), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximal_function_rect(grid, RectSupMode::full));
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_MaximalRectFull)->Arg(64)->Arg(256);

void BM_OrliczNormSamples(benchmark::State& state) {
  SampleSet samples;
  SiteStream stream(5);
  samples.values.resize(static_cast<std::size_t>(state.range(0)));
  for (double& v : samples.values) v = stream.next_normal();
  const OrliczParams params(2, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(orlicz_norm_samples(samples, params));
  }
}
BENCHMARK(BM_OrliczNormSamples)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();

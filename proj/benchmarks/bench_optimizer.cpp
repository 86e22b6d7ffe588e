#include <benchmark/benchmark.h>

#include "flexacc/io.hpp"
#include "flexacc/optimizer.hpp"

using namespace flexacc;

namespace {

void BM_OptimizeLayer(benchmark::State& state) {
  const auto net = load_network(FLEXACC_DATA_DIR "/c3d.net");
  const auto arch = load_arch(FLEXACC_DATA_DIR "/morph.arch");
  const auto table = load_energy(FLEXACC_DATA_DIR "/default.energy");
  SearchOptions o;
  o.tile_points = static_cast<int>(state.range(1));
  const auto& l = net.layers[state.range(0)];
  for (auto _ : state) benchmark::DoNotOptimize(optimize_layer(l, arch, table, Objective::Energy, o));
  state.counters["configs"] = static_cast<double>(count_configs(l, arch, o));
}
BENCHMARK(BM_OptimizeLayer)->Args({7, 4})->Args({7, 8})->Args({0, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "flexacc/conv_reference.hpp"
#include "flexacc/funcsim.hpp"
#include "flexacc/io.hpp"
#include "flexacc/traffic.hpp"

using namespace flexacc;

namespace {

const Network& c3d() {
  static const Network n = load_network(FLEXACC_DATA_DIR "/c3d.net");
  return n;
}

std::vector<TileExtent> chain(const LayerShape& l) {
  auto top = layer_extent(l);
  top.w = std::min<std::int64_t>(top.w, 16);
  top.h = std::min<std::int64_t>(top.h, 16);
  top.c = std::min<std::int64_t>(top.c, 32);
  return {top, {8, 8, top.c, 16, 2}, {4, 4, 1, 8, 1}};
}

void BM_EngineBuild(benchmark::State& state) {
  const auto& l = c3d().layers[state.range(0)];
  const auto tiles = chain(l);
  for (auto _ : state) benchmark::DoNotOptimize(TrafficEngine(l, tiles));
}
BENCHMARK(BM_EngineBuild)->Arg(0)->Arg(4);

void BM_BoundaryAllOrders(benchmark::State& state) {
  const auto& l = c3d().layers[state.range(0)];
  const auto tiles = chain(l);
  const TrafficEngine engine(l, tiles);
  const auto orders = enumerate_loop_orders();
  for (auto _ : state)
    for (const auto& o : orders) benchmark::DoNotOptimize(engine.boundary(o, o, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(orders.size()));
}
BENCHMARK(BM_BoundaryAllOrders)->Arg(0)->Arg(4);

void BM_SimulateDeskLayer(benchmark::State& state) {
  const auto tiny = load_network(FLEXACC_DATA_DIR "/tiny.net");
  const auto arch = load_arch(FLEXACC_DATA_DIR "/morph.arch");
  const auto& l = tiny.layers[0];
  Config c;
  c.tiles.levels = {layer_extent(l), {4, 4, 2, 4, 2}, {2, 2, 1, 4, 1}};
  c.vector_width = arch.vector_width;
  const auto in = random_tensor(input_dims(l), 1);
  const auto fl = random_tensor(filter_dims(l), 2);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(l, c, arch, in, fl));
  state.SetItemsProcessed(state.iterations() * macc_count(l));
}
BENCHMARK(BM_SimulateDeskLayer);

}  // namespace

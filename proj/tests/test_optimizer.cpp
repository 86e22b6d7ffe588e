#include <gtest/gtest.h>

#include "flexacc/cost.hpp"
#include "flexacc/error.hpp"
#include "flexacc/io.hpp"
#include "flexacc/optimizer.hpp"
#include "support.hpp"

using namespace flexacc;

namespace {

ArchSpec desk_arch() {
  ArchSpec a;
  a.name = "desk";
  a.clusters = 2;
  a.pes_per_cluster = 4;
  a.vector_width = 2;
  a.levels = {{"L2", 8192, 16, 64, true}, {"L1", 1024, 8, 16, true}};
  a.bus_bits = {32};
  return a;
}

SearchOptions desk_options() {
  SearchOptions o;
  o.tile_points = 3;
  for (auto s : {"CFHKW", "KWFHC", "WFKHC", "FHKCW"}) o.outer_orders.push_back(LoopOrder::parse(s));
  for (auto s : {"CKFHW", "WHCKF", "KCWHF"}) o.inner_orders.push_back(LoopOrder::parse(s));
  return o;
}

LayerResult brute_force(const LayerShape& l, const ArchSpec& arch, const EnergyTable& table,
                        Objective obj, const SearchOptions& options) {
  LayerResult best;
  bool found = false;
  for (const auto& c : generate_configs(l, arch, options)) {
    auto full = complete_config(l, c, arch, table);
    if (!full) continue;
    auto r = evaluate(l, *full, arch, table);
    if (!found || better(obj, r, *full, best.report, best.config)) {
      best.config = *full;
      best.report = r;
      found = true;
    }
  }
  EXPECT_TRUE(found);
  return best;
}

}  // namespace

TEST(Optimizer, DiscretizeKeepsEndpointsAndDivisors) {
  EXPECT_EQ(discretize(12, 8), (std::vector<std::int64_t>{1, 2, 3, 4, 6, 12}));
  auto d = discretize(112, 4);
  EXPECT_EQ(d.front(), 1);
  EXPECT_EQ(d.back(), 112);
  EXPECT_LE(d.size(), 4u);
  for (auto v : d) EXPECT_EQ(112 % v, 0);
  EXPECT_EQ(discretize(7, 3), (std::vector<std::int64_t>{1, 7}));
}

TEST(Optimizer, ConfigCountIsTheProductOfAxes) {
  auto l = test::layer(8, 8, 4, 6, 4, 3, 3, 3);
  auto arch = desk_arch();
  auto o = desk_options();
  auto n = count_configs(l, arch, o);
  EXPECT_EQ(n, static_cast<std::int64_t>(4 * 3 * candidate_top_tiles(l, arch, o).size() *
                                         candidate_parallelism(l, arch, o).size()));
  EXPECT_EQ(static_cast<std::int64_t>(generate_configs(l, arch, o).size()), n);
}

TEST(Optimizer, TopTilesAllFitTheLastLevel) {
  auto l = test::layer(8, 8, 4, 6, 4, 3, 3, 3);
  auto arch = desk_arch();
  for (const auto& t : candidate_top_tiles(l, arch, desk_options())) {
    int banks = 0;
    for (auto type : kAllDataTypes)
      banks += bank_demand(arch.levels[0], tile_elements(l, t, type) * element_bytes(l, type));
    EXPECT_LE(banks, arch.levels[0].banks);
  }
}

TEST(Optimizer, CornersSpanMinAndMaxPerVaryingDim) {
  auto corners = corner_candidates({1, 1, 4, 1, 1}, {4, 2, 4, 3, 1});
  EXPECT_EQ(corners.size(), 8u);
  EXPECT_EQ(corners.front(), (TileExtent{4, 2, 4, 3, 1}));
  EXPECT_EQ(corners.back(), (TileExtent{1, 1, 4, 1, 1}));
  EXPECT_EQ(minimum_subtile({5, 6, 7, 8, 9}), (TileExtent{1, 1, 7, 1, 1}));
}

TEST(Optimizer, AllocateTakesTheParentWhenItFits) {
  auto l = test::layer(8, 8, 2, 4, 2, 3, 3, 3);
  auto arch = test::roomy_arch(2);
  auto table = test::flat_table();
  std::vector<TileExtent> parents{{2, 2, 2, 2, 1}};
  auto t = allocate(l, 1, parents, LoopOrder(), LoopOrder(), arch, table);
  EXPECT_EQ(t, parents[0]);
}

TEST(Optimizer, AllocateFailsWhenNothingFits) {
  auto l = test::layer(8, 8, 64, 4, 2, 3, 3, 3);
  auto arch = test::roomy_arch(2);
  arch.levels[1] = {"L0", 64, 2, 8, false};
  std::vector<TileExtent> parents{{2, 2, 64, 2, 1}};
  EXPECT_THROW(allocate(l, 1, parents, LoopOrder(), LoopOrder(), arch, test::flat_table()),
               CapacityError);
  EXPECT_THROW(allocate(l, 0, {}, LoopOrder(), LoopOrder(), arch, test::flat_table()),
               ValidationError);
}

TEST(Optimizer, FactoredSearchEqualsBruteForce) {
  auto arch = desk_arch();
  auto table = load_energy(test::data_file("default.energy"));
  auto options = desk_options();
  auto l = test::layer(8, 8, 4, 6, 4, 3, 3, 3);
  for (auto obj : {Objective::Energy, Objective::Perf, Objective::PerfPerWatt}) {
    auto fast = optimize_layer(l, arch, table, obj, options);
    auto slow = brute_force(l, arch, table, obj, options);
    EXPECT_NEAR(fast.report.energy.total_pj, slow.report.energy.total_pj,
                1e-9 * slow.report.energy.total_pj)
        << to_string(obj);
    EXPECT_EQ(fast.report.cycles, slow.report.cycles) << to_string(obj);
    EXPECT_EQ(fast.config, slow.config) << to_string(obj);
  }
}

TEST(Optimizer, OptimumBeatsEveryFixedOrder) {
  auto arch = desk_arch();
  auto table = load_energy(test::data_file("default.energy"));
  auto options = desk_options();
  auto l = test::layer(8, 8, 4, 6, 4, 3, 3, 3);
  auto best = optimize_layer(l, arch, table, Objective::Energy, options);
  for (const auto& o : options.outer_orders) {
    auto fixed = options;
    fixed.outer_orders = {o};
    auto r = optimize_layer(l, arch, table, Objective::Energy, fixed);
    EXPECT_LE(best.report.energy.total_pj, r.report.energy.total_pj) << o.to_string();
  }
}

TEST(Optimizer, ObjectivesPullInTheirOwnDirection) {
  auto arch = desk_arch();
  auto table = load_energy(test::data_file("default.energy"));
  auto l = test::layer(8, 8, 4, 6, 4, 3, 3, 3);
  auto e = optimize_layer(l, arch, table, Objective::Energy, desk_options());
  auto p = optimize_layer(l, arch, table, Objective::Perf, desk_options());
  auto w = optimize_layer(l, arch, table, Objective::PerfPerWatt, desk_options());
  EXPECT_LE(e.report.energy.total_pj, p.report.energy.total_pj);
  EXPECT_LE(p.report.cycles, e.report.cycles);
  EXPECT_GE(w.report.perf_per_watt, p.report.perf_per_watt);
}

TEST(Optimizer, DeterministicAcrossThreadCounts) {
  auto arch = desk_arch();
  auto table = load_energy(test::data_file("default.energy"));
  auto l = test::layer(8, 8, 4, 6, 4, 3, 3, 3);
  auto o1 = desk_options();
  auto o4 = o1;
  o4.threads = 4;
  auto a = optimize_layer(l, arch, table, Objective::Energy, o1);
  auto b = optimize_layer(l, arch, table, Objective::Energy, o4);
  EXPECT_EQ(a.config, b.config);
  EXPECT_EQ(a.report.energy.total_pj, b.report.energy.total_pj);
}

TEST(Optimizer, BaselineNeverBeatsPerLayerOptimum) {
  auto arch = desk_arch();
  auto table = load_energy(test::data_file("default.energy"));
  Network n;
  n.name = "pair";
  n.layers = {test::layer(8, 8, 2, 6, 4, 3, 3, 3), test::layer(6, 6, 4, 4, 8, 3, 3, 1)};
  n.layers[0].name = "a";
  n.layers[1].name = "b";
  auto cmp = compare_network(n, arch, table, Objective::Energy, desk_options());
  ASSERT_EQ(cmp.baseline.layers.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LE(cmp.optimized.layers[i].report.energy.total_pj,
              cmp.baseline.layers[i].report.energy.total_pj);
    EXPECT_EQ(cmp.baseline.layers[i].config.outer, cmp.baseline.outer);
    EXPECT_EQ(cmp.baseline.layers[i].config.inner, cmp.baseline.inner);
  }
  auto alone = baseline_fixed(n, arch, table, desk_options());
  EXPECT_EQ(alone.total_energy_pj, cmp.baseline.total_energy_pj);
}

TEST(Optimizer, ImpossibleLayerReportsSearchSpaceError) {
  auto arch = desk_arch();
  arch.levels[0] = {"L2", 32, 16, 64, true};
  auto l = test::layer(8, 8, 64, 6, 4, 3, 3, 3);
  EXPECT_THROW(optimize_layer(l, arch, test::flat_table(), Objective::Energy, desk_options()),
               SearchSpaceError);
}

TEST(Optimizer, ObjectiveNames) {
  EXPECT_EQ(parse_objective("perf_per_watt"), Objective::PerfPerWatt);
  EXPECT_EQ(to_string(parse_objective("energy")), "energy");
  EXPECT_ANY_THROW(parse_objective("speed"));
}

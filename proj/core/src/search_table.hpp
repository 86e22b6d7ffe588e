#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "flexacc/optimizer.hpp"

namespace flexacc::detail {

/// On-chip half of the search for one (last-level tile, inner order class).
struct InnerEval {
  bool feasible = false;
  std::vector<TileExtent> tiles;                 // every level, last-level first
  std::vector<std::array<int, 3>> bank_demand;   // per level
  double energy = 0.0;                           // min over parallelism
  Parallelism energy_par;
  std::int64_t energy_cycles = 0;
  std::int64_t min_cycles = 0;
  double perf_energy = 0.0;                      // on-chip energy at min_cycles
  Parallelism perf_par;
};

struct TopEntry {
  TileExtent top;
  std::vector<double> offchip;  // indexed like LayerTable::outer
  std::vector<int> slot;        // inner order index -> evals
  std::vector<InnerEval> evals;
};

/// Every score the selection steps need for one layer, factored into the
/// outer-order (DRAM) half and the inner-order (on-chip) half.
struct LayerTable {
  LayerShape layer;
  std::vector<LoopOrder> outer;
  std::vector<LoopOrder> inner;
  std::vector<Parallelism> pars;
  std::vector<TopEntry> tops;
  int vector_width = 1;
  std::int64_t examined = 0;
  std::int64_t discarded = 0;

  const InnerEval& eval(std::size_t t, std::size_t i) const {
    return tops[t].evals[tops[t].slot[i]];
  }
  Config config(std::size_t t, std::size_t o, std::size_t i, const Parallelism& par) const;
};

LayerTable build_table(const LayerShape& layer, const ArchSpec& arch, const EnergyTable& table,
                       const SearchOptions& options, int threads = 1);

struct Pick {
  std::size_t t = 0, o = 0, i = 0;
  Parallelism par;
  double energy = 0.0;
  std::int64_t cycles = 0;
};

/// Winner under `objective` over the outer/inner index subsets given (empty =
/// all), with ties going to the lexicographically smallest config. Returns
/// false when every candidate is infeasible.
bool pick(const LayerTable& table, Objective objective, const std::vector<std::size_t>& outer,
          const std::vector<std::size_t>& inner, Pick& out);

/// Re-evaluates a pick end to end and checks it reproduces the table's score.
LayerResult realize(const LayerTable& table, const Pick& p, const ArchSpec& arch,
                    const EnergyTable& energy);

}  // namespace flexacc::detail

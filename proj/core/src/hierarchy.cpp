#include "flexacc/hierarchy.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "flexacc/cost.hpp"
#include "flexacc/error.hpp"
#include "flexacc/optimizer.hpp"
#include "flexacc/traffic.hpp"

namespace flexacc {
namespace {

// Smallest banked buffer that holds the tile with every datatype in its own
// banks, double buffered.
BufferLevel sized_level(const LayerShape& layer, const TileExtent& tile, int level,
                        const DepthSweepOptions& opt) {
  BufferLevel b;
  b.name = "B" + std::to_string(level);
  b.banks = opt.banks;
  b.word_bits = opt.word_bits;
  b.double_buffered = true;
  const std::int64_t word = std::max(1, opt.word_bits / 8);
  std::array<std::int64_t, 3> bytes{};
  std::int64_t largest = 0;
  for (auto t : kAllDataTypes) {
    bytes[index(t)] = tile_elements(layer, tile, t) * element_bytes(layer, t);
    largest = std::max(largest, bytes[index(t)]);
  }
  auto fits = [&](std::int64_t bank_words) {
    b.bytes = bank_words * word * b.banks;
    int used = 0;
    for (auto v : bytes) used += bank_demand(b, v);
    return used <= b.banks;
  };
  std::int64_t lo = 1, hi = 2 * ((largest + word - 1) / word) + 2;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (fits(mid)) hi = mid;
    else lo = mid + 1;
  }
  fits(lo);
  return b;
}

ArchSpec truncated(const ArchSpec& base, const std::vector<BufferLevel>& levels) {
  ArchSpec a = base;
  a.levels = levels;
  a.bus_bits.resize(levels.empty() ? 0 : levels.size() - 1, 32);
  for (std::size_t b = 0; b < a.bus_bits.size() && b < base.bus_bits.size(); ++b)
    a.bus_bits[b] = base.bus_bits[b];
  return a;
}

struct Scored {
  double energy = std::numeric_limits<double>::infinity();
  std::vector<TileExtent> tiles;
  LoopOrder order;
};

std::string class_key(const LoopOrder& order, const std::array<bool, 5>& mask) {
  std::string key;
  for (auto d : order.dims())
    if (mask[index(d)]) key += dim_letter(d);
  return key;
}

}  // namespace

ArchSpec sized_arch(const ArchSpec& base, const LayerShape& layer, const TileSpec& tiles,
                    const DepthSweepOptions& options) {
  const auto clipped = clipped_levels(layer, tiles);
  std::vector<BufferLevel> levels;
  for (std::size_t l = 0; l < clipped.size(); ++l)
    levels.push_back(sized_level(layer, clipped[l], static_cast<int>(l), options));
  return truncated(base, levels);
}

std::vector<DepthResult> sweep_hierarchy_depth(const LayerShape& layer, const ArchSpec& arch,
                                               const EnergyTable& table,
                                               const DepthSweepOptions& options) {
  layer.validate();
  if (options.max_depth < 1 || options.max_depth > TrafficEngine::kMaxLevels)
    throw ValidationError("max_depth must be in 1.." + std::to_string(TrafficEngine::kMaxLevels));
  if (options.banks < 3) throw ValidationError("sized buffers need at least 3 banks");

  const TileExtent total = layer_extent(layer);
  std::array<std::vector<std::int64_t>, 5> axis;
  for (auto d : kAllDims) axis[index(d)] = discretize(total.get(d), options.tile_points);
  const auto orders = enumerate_loop_orders();
  const std::int64_t maccs = macc_count(layer);
  // Static NoC energy is charged at the ideal compute-bound cycle count so
  // that depths are compared on traffic alone.
  const std::int64_t lanes = static_cast<std::int64_t>(arch.total_pes()) * arch.vector_width;
  const std::int64_t ideal_cycles = (maccs + lanes - 1) / lanes;

  // On-chip energy of a full tile chain under one inner order.
  auto onchip_of = [&](const std::vector<TileExtent>& tiles, const LoopOrder& inner) {
    std::vector<BufferLevel> levels;
    for (std::size_t l = 0; l < tiles.size(); ++l)
      levels.push_back(sized_level(layer, tiles[l], static_cast<int>(l), options));
    TrafficEngine e(layer, tiles);
    TrafficCounts counts;
    counts.boundaries.resize(tiles.size());
    for (int b = 1; b < e.levels(); ++b) counts.boundaries[b] = e.boundary(inner, inner, b);
    counts.datapath = e.datapath(arch.vector_width);
    counts.maccs = maccs;
    return onchip_energy(counts, layer, truncated(arch, levels), table, ideal_cycles).onchip_side;
  };

  struct Candidate {
    double energy;
    double offchip;
    std::vector<TileExtent> tiles;
    LoopOrder outer, inner;
  };
  constexpr std::size_t kRefine = 16;

  std::vector<DepthResult> out;
  for (int depth = 1; depth <= options.max_depth; ++depth) {
    // Pass 1: every top tile and inner order class, lower levels chosen greedily
    // one level at a time among corners of the parent tile.
    std::vector<Candidate> pool;
    for (auto w : axis[0])
      for (auto h : axis[1])
        for (auto c : axis[2])
          for (auto k : axis[3])
            for (auto f : axis[4]) {
              const TileExtent top{w, h, c, k, f};
              const TileExtent one[] = {top};
              TrafficEngine engine(layer, one);
              std::array<bool, 5> split_here{}, split_below{};
              for (auto d : kAllDims) {
                split_here[index(d)] = engine.tile_count(d, 0) > 1;
                split_below[index(d)] = d != Dim::C && top.get(d) > 1;
              }
              const ArchSpec top_arch = truncated(arch, {sized_level(layer, top, 0, options)});
              double best_a = std::numeric_limits<double>::infinity();
              LoopOrder outer;
              std::map<std::string, bool> seen;
              for (const auto& o : orders) {
                if (!seen.emplace(class_key(o, split_here), true).second) continue;
                const double a =
                    offchip_energy(engine.boundary(o, o, 0), layer, top_arch, table).offchip;
                if (a < best_a) {
                  best_a = a;
                  outer = o;
                }
              }
              seen.clear();
              for (const auto& i : orders) {
                if (!seen.emplace(class_key(i, split_below), true).second) continue;
                std::vector<TileExtent> tiles{top};
                double onchip = onchip_of(tiles, i);
                for (int l = 1; l < depth; ++l) {
                  const TileExtent parent = tiles.back();
                  tiles.push_back(parent);
                  double local = std::numeric_limits<double>::infinity();
                  TileExtent pick = parent;
                  for (const auto& cand : corner_candidates(minimum_subtile(parent), parent)) {
                    tiles.back() = cand;
                    const double v = onchip_of(tiles, i);
                    if (v < local) {
                      local = v;
                      pick = cand;
                    }
                  }
                  tiles.back() = pick;
                  onchip = local;
                }
                pool.push_back({best_a + onchip, best_a, tiles, outer, i});
              }
            }
    const std::size_t keep = std::min(kRefine, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                      [](const Candidate& a, const Candidate& b) { return a.energy < b.energy; });
    pool.resize(keep);

    // Pass 2: for the best candidates, try every non-increasing chain over a
    // few extents per dimension (1, a middle divisor, the top extent).
    Candidate best = pool.front();
    for (const auto& cand : pool) {
      const TileExtent top = cand.tiles.front();
      std::vector<Dim> varying;
      std::vector<std::vector<std::vector<std::int64_t>>> per_dim;  // chains per varying dim
      for (auto d : kAllDims) {
        if (d == Dim::C || top.get(d) == 1) continue;
        auto values = discretize(top.get(d), 3);
        std::vector<std::vector<std::int64_t>> chains{{}};
        for (int l = 1; l < depth; ++l) {
          std::vector<std::vector<std::int64_t>> next;
          for (const auto& ch : chains)
            for (auto v : values)
              if (ch.empty() || v <= ch.back()) {
                next.push_back(ch);
                next.back().push_back(v);
              }
          chains = std::move(next);
        }
        varying.push_back(d);
        per_dim.push_back(std::move(chains));
      }
      std::vector<std::size_t> pick(varying.size(), 0);
      while (true) {
        std::vector<TileExtent> tiles(depth, top);
        for (std::size_t v = 0; v < varying.size(); ++v)
          for (int l = 1; l < depth; ++l) tiles[l].set(varying[v], per_dim[v][pick[v]][l - 1]);
        const double e = cand.offchip + onchip_of(tiles, cand.inner);
        if (e < best.energy) best = {e, cand.offchip, tiles, cand.outer, cand.inner};
        std::size_t v = 0;
        while (v < pick.size() && ++pick[v] == per_dim[v].size()) pick[v++] = 0;
        if (v == pick.size()) break;
      }
    }
    Scored best_total{best.energy, best.tiles, best.inner};
    const LoopOrder best_outer = best.outer;

    DepthResult r;
    r.depth = depth;
    r.config.outer = best_outer;
    r.config.inner = best_total.order;
    r.config.tiles.levels = best_total.tiles;
    r.config.vector_width = arch.vector_width;
    const ArchSpec sized = sized_arch(arch, layer, r.config.tiles, options);
    TrafficEngine e(layer, r.config.tiles.levels);
    TrafficCounts counts;
    for (int b = 0; b < e.levels(); ++b)
      counts.boundaries.push_back(e.boundary(r.config.outer, r.config.inner, b));
    counts.datapath = e.datapath(arch.vector_width);
    counts.maccs = maccs;
    const auto eb = energy(counts, layer, sized, table, ideal_cycles);
    r.energy_pj = eb.total_pj;
    for (double v : eb.levels) r.buffer_pj += v;
    for (const auto& l : sized.levels) r.buffer_bytes.push_back(l.bytes);
    out.push_back(r);
  }
  return out;
}

}  // namespace flexacc

#include "flexacc/arch.hpp"
#include "flexacc/cost.hpp"
#include "flexacc/error.hpp"
#include "flexacc/optimizer.hpp"
#include "flexacc/traffic.hpp"

namespace flexacc {
namespace {

// Accesses each datatype must serve per layer regardless of tiling: one input
// read feeds every lane, one filter read per MACC, and every psum update.
std::array<double, 3> demand(const LayerShape& layer, const TrafficEngine& engine,
                             int vector_width) {
  const auto maccs = static_cast<double>(macc_count(layer));
  const auto dp = engine.datapath(vector_width);
  return {maccs / vector_width, maccs, static_cast<double>(dp.psum_reads + dp.psum_writes)};
}

std::array<double, 3> fills(const BoundaryTraffic& bt) {
  return {static_cast<double>(bt[DataType::Input].fill_elements),
          static_cast<double>(bt[DataType::Filter].fill_elements),
          static_cast<double>(bt[DataType::Psum].fill_elements +
                              bt[DataType::Psum].writeback_elements)};
}

}  // namespace

std::vector<TileExtent> corner_candidates(const TileExtent& min_tile, const TileExtent& max_tile) {
  std::vector<TileExtent> out;
  std::vector<Dim> varying;
  for (auto d : kAllDims)
    if (min_tile.get(d) != max_tile.get(d)) varying.push_back(d);
  const std::size_t n = std::size_t{1} << varying.size();
  for (std::size_t code = 0; code < n; ++code) {
    TileExtent t = max_tile;
    for (std::size_t i = 0; i < varying.size(); ++i)
      if (code >> (varying.size() - 1 - i) & 1u) t.set(varying[i], min_tile.get(varying[i]));
    out.push_back(t);
  }
  return out;
}

TileExtent minimum_subtile(const TileExtent& parent) {
  TileExtent t;
  t.c = parent.c;
  return t;
}

std::array<double, 3> f_reuse_per_type(const LayerShape& layer, std::span<const TileExtent> tiles,
                                       const LoopOrder& outer, const LoopOrder& inner, int level,
                                       int vector_width) {
  TrafficEngine engine(layer, tiles.subspan(0, level + 1));
  const auto need = demand(layer, engine, vector_width);
  const auto got = fills(engine.boundary(outer, inner, level));
  std::array<double, 3> r{};
  for (int t = 0; t < 3; ++t) r[t] = got[t] > 0 ? need[t] / got[t] : 0.0;
  return r;
}

double f_reuse(const LayerShape& layer, std::span<const TileExtent> tiles, const LoopOrder& outer,
               const LoopOrder& inner, int level, const ArchSpec& arch, const EnergyTable& table) {
  TrafficEngine engine(layer, tiles.subspan(0, level + 1));
  const auto need = demand(layer, engine, arch.vector_width);
  const auto got = fills(engine.boundary(outer, inner, level));
  double num = 0.0, den = 0.0;
  for (auto t : kAllDataTypes) {
    const double w = level == 0 ? element_bits(layer, t) * table.dram_pj_per_bit
                                : access_energy_pj(layer, arch.levels[level - 1], table, t);
    num += w * need[index(t)];
    den += w * got[index(t)];
  }
  return den > 0 ? num / den : 0.0;
}

TileExtent allocate(const LayerShape& layer, int level, std::span<const TileExtent> parents,
                    const LoopOrder& outer, const LoopOrder& inner, const ArchSpec& arch,
                    const EnergyTable& table) {
  if (level < 1 || static_cast<std::size_t>(level) != parents.size() ||
      level >= static_cast<int>(arch.levels.size()))
    throw ValidationError("allocate: level must be below the last-level buffer");
  const TileExtent& parent = parents.back();
  const BufferLevel& buffer = arch.levels[level];
  std::vector<TileExtent> tiles(parents.begin(), parents.end());
  tiles.push_back(parent);

  bool found = false;
  TileExtent best;
  double best_score = 0.0;
  std::int64_t best_input = 0;
  for (const auto& cand : corner_candidates(minimum_subtile(parent), parent)) {
    int banks = 0;
    for (auto t : kAllDataTypes)
      banks += bank_demand(buffer, tile_elements(layer, cand, t) * element_bytes(layer, t));
    if (banks > buffer.banks) continue;
    tiles.back() = cand;
    const double score = f_reuse(layer, tiles, outer, inner, level, arch, table);
    const std::int64_t input = tile_elements(layer, cand, DataType::Input);
    if (!found || score > best_score || (score == best_score && input > best_input)) {
      found = true;
      best = cand;
      best_score = score;
      best_input = input;
    }
  }
  if (!found)
    throw CapacityError("level " + buffer.name + ": no tile allocation fits " +
                        std::to_string(buffer.banks) + " banks");
  return best;
}

std::optional<Config> complete_config(const LayerShape& layer, const Config& config,
                                      const ArchSpec& arch, const EnergyTable& table) {
  if (config.tiles.levels.empty()) throw ValidationError("config has no last-level tile");
  Config out = config;
  out.tiles.levels.resize(1);
  try {
    for (int l = 1; l < static_cast<int>(arch.levels.size()); ++l)
      out.tiles.levels.push_back(
          allocate(layer, l, out.tiles.levels, config.outer, config.inner, arch, table));
  } catch (const CapacityError&) {
    return std::nullopt;
  }
  return out;
}

}  // namespace flexacc

#include "flexacc/traffic.hpp"

#include <algorithm>
#include <limits>

#include "flexacc/error.hpp"

namespace flexacc {
namespace {

constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

// Loop position of dimension d in block `block` of the flattened nest.
int position(const LoopOrder& outer, const LoopOrder& inner, int block, Dim d) {
  return 5 * block + (block == 0 ? outer.position(d) : inner.position(d));
}

Dim dim_at(const LoopOrder& outer, const LoopOrder& inner, int pos) {
  return pos < 5 ? outer.at(pos) : inner.at(pos % 5);
}

}  // namespace

TrafficEngine::TrafficEngine(const LayerShape& layer, std::span<const TileExtent> tiles,
                             TrafficOptions options)
    : levels_(static_cast<int>(tiles.size())), options_(options) {
  if (tiles.empty()) throw ValidationError("traffic model needs at least one tile level");
  if (levels_ > kMaxLevels)
    throw ValidationError("traffic model supports at most " + std::to_string(kMaxLevels) +
                          " levels");
  rst_ = layer.R * layer.S * layer.T;
  maccs_ = macc_count(layer);
  const TileExtent total = layer_extent(layer);
  for (auto d : kAllDims) {
    auto& prof = dims_[index(d)];
    prof.filter = filter_extent(layer, d);
    prof.stride = stride(layer, d);
    prof.halo = d == Dim::C || d == Dim::K ? 0 : halo_overlap(prof.filter, prof.stride);
    prof.levels[0].items[0] = {total.get(d), 1};
    prof.levels[0].size = 1;
    prof.counts[0] = 1;
    std::int64_t parent_size = total.get(d);
    for (int l = 0; l < levels_; ++l) {
      const std::int64_t size = std::min(tiles[l].get(d), parent_size);
      parent_size = size;
      prof.tile[l] = size;
      const PieceList& from = prof.levels[l];
      PieceList& to = prof.levels[l + 1];
      auto add = [&to](std::int64_t e, std::int64_t c) {
        for (int i = 0; i < to.size; ++i)
          if (to.items[i].extent == e) {
            to.items[i].count += c;
            return;
          }
        int i = to.size++;
        while (i > 0 && to.items[i - 1].extent > e) {
          to.items[i] = to.items[i - 1];
          --i;
        }
        to.items[i] = {e, c};
      };
      for (int i = 0; i < from.size; ++i) {
        const auto& p = from.items[i];
        if (p.extent <= size) {
          add(p.extent, p.count);
          continue;
        }
        add(size, p.count * (p.extent / size));
        if (p.extent % size) add(p.extent % size, p.count);
      }
      std::int64_t n = 0;
      for (int i = 0; i < to.size; ++i) n += to.items[i].count;
      prof.counts[l + 1] = n;
    }
  }
}

std::span<const TrafficEngine::Piece> TrafficEngine::pieces(Dim d, int level) const {
  const auto& list = dims_[index(d)].levels[level + 1];
  return {list.items.data(), static_cast<std::size_t>(list.size)};
}

std::int64_t TrafficEngine::tile_count(Dim d, int level) const {
  return dims_[index(d)].counts[level + 1];
}

std::int64_t TrafficEngine::g(DataType type, Dim d, std::int64_t e) const {
  if (type == DataType::Input && d != Dim::C) {
    const auto& prof = dims_[index(d)];
    return input_tile_extent(e, prof.filter, prof.stride);
  }
  return e;
}

std::int64_t TrafficEngine::sum_g(DataType type, Dim d, int level) const {
  std::int64_t s = 0;
  for (const auto& p : pieces(d, level)) s += p.count * g(type, d, p.extent);
  return s;
}

std::int64_t TrafficEngine::count_fitting(Dim d, int level, std::int64_t limit) const {
  std::int64_t s = 0;
  for (const auto& p : pieces(d, level))
    if (p.extent <= limit) s += p.count;
  return s;
}

std::int64_t TrafficEngine::sum_g_fitting(DataType type, Dim d, int level,
                                          std::int64_t limit) const {
  std::int64_t s = 0;
  for (const auto& p : pieces(d, level))
    if (p.extent <= limit) s += p.count * g(type, d, p.extent);
  return s;
}

TransferCounts TrafficEngine::transfers(const LoopOrder& outer, const LoopOrder& inner, int b,
                                        DataType type) const {
  if (b < 0 || b >= levels()) throw ValidationError("boundary out of range");

  // Deepest level of dimension d fixed by the loops strictly outside position p.
  auto level_outside = [&](Dim d, int p) {
    int block = p / 5;
    return position(outer, inner, block, d) < p ? block : block - 1;
  };
  // A level-lambda tile is not split again down to level b iff it fits every
  // tile size in between.
  auto limit = [&](Dim d, int lambda) {
    std::int64_t m = kUnbounded;
    for (int l = lambda + 1; l <= b; ++l) m = std::min(m, dims_[index(d)].tile[l]);
    return m;
  };
  auto count = [&](Dim d, int level) { return tile_count(d, level); };

  int q = 0;
  for (auto d : kAllDims)
    if (is_relevant(type, d)) q = std::max(q, position(outer, inner, b, d));

  std::int64_t n = 1, n_vol = 1;
  for (auto d : kAllDims) {
    if (is_relevant(type, d)) {
      n *= count(d, b);
      n_vol *= sum_g(type, d, b);
    } else {
      auto c = count(d, level_outside(d, q));
      n *= c;
      n_vol *= c;
    }
  }

  // Steps where an irrelevant loop advances while every relevant loop inside
  // it has a single iteration leave the region unchanged.
  std::int64_t merges = 0, merge_vol = 0;
  const int first = b == 0 ? 0 : 5;
  for (int j = first; j < q; ++j) {
    Dim z = dim_at(outer, inner, j);
    if (is_relevant(type, z)) continue;
    int block = j / 5;
    std::int64_t steps = count(z, block) - count(z, block - 1);
    if (steps == 0) continue;
    std::int64_t m = steps, mv = steps;
    for (auto d : kAllDims) {
      if (d == z) continue;
      int lambda = level_outside(d, j);
      if (is_relevant(type, d)) {
        auto lim = limit(d, lambda);
        m *= count_fitting(d, lambda, lim);
        mv *= sum_g_fitting(type, d, lambda, lim);
      } else {
        m *= count(d, lambda);
        mv *= count(d, lambda);
      }
    }
    merges += m;
    merge_vol += mv;
  }

  // Forward moves along a single input axis keep the overlap with the previous tile.
  std::int64_t slide_vol = 0;
  if (type == DataType::Input) {
    for (int j = first; j <= q; ++j) {
      Dim x = dim_at(outer, inner, j);
      if (x == Dim::C || x == Dim::K) continue;
      std::int64_t h = dims_[index(x)].halo + options_.halo_bias;
      if (h <= 0) continue;
      int block = j / 5;
      std::int64_t v = (count(x, block) - count(x, block - 1)) * h;
      for (auto d : kAllDims) {
        if (d == x) continue;
        int lambda = level_outside(d, j);
        if (is_relevant(type, d))
          v *= sum_g_fitting(type, d, lambda, limit(d, lambda));
        else
          v *= count(d, lambda);
      }
      slide_vol += v;
    }
  }

  TransferCounts t;
  std::int64_t visits = n - merges;
  std::int64_t volume = n_vol - merge_vol;
  switch (type) {
    case DataType::Input:
      t.fills = visits;
      t.fill_elements = volume - slide_vol;
      break;
    case DataType::Filter:
      t.fills = visits;
      t.fill_elements = volume * rst_;
      break;
    case DataType::Psum: {
      std::int64_t outputs = 1;
      for (auto d : kAllDims)
        if (is_relevant(type, d)) outputs *= pieces(d, -1)[0].extent;
      std::int64_t distinct = 1;
      for (auto d : kAllDims)
        if (is_relevant(type, d)) distinct *= count(d, b);
      t.fills = visits - distinct;
      t.fill_elements = volume - outputs;
      t.writebacks = visits;
      t.writeback_elements = volume;
      break;
    }
  }
  return t;
}

BoundaryTraffic TrafficEngine::boundary(const LoopOrder& outer, const LoopOrder& inner,
                                        int b) const {
  BoundaryTraffic bt;
  for (auto t : kAllDataTypes) bt[t] = transfers(outer, inner, b, t);
  return bt;
}

DatapathCounts TrafficEngine::datapath(int vector_width) const {
  const int bottom = levels() - 1;
  auto total = [&](Dim d) { return pieces(d, -1)[0].extent; };
  std::int64_t lane_groups = 0;
  for (const auto& p : pieces(Dim::K, bottom))
    lane_groups += p.count * ((p.extent + vector_width - 1) / vector_width);
  const std::int64_t positions = total(Dim::W) * total(Dim::H) * total(Dim::F);
  const std::int64_t outputs = positions * total(Dim::K);
  const std::int64_t c_tiles = tile_count(Dim::C, bottom);
  DatapathCounts dp;
  dp.input_reads = rst_ * positions * total(Dim::C) * lane_groups;
  dp.filter_reads = maccs_;
  dp.psum_writes = outputs * c_tiles;
  dp.psum_reads = outputs * (c_tiles - 1);
  return dp;
}

BoundaryTraffic traffic_model(const LayerShape& layer, const Config& config, int level,
                              const TrafficOptions& options) {
  TrafficEngine engine(layer, config.tiles.levels, options);
  return engine.boundary(config.outer, config.inner, level);
}

TrafficCounts traffic_model(const LayerShape& layer, const Config& config,
                            const TrafficOptions& options) {
  TrafficEngine engine(layer, config.tiles.levels, options);
  TrafficCounts tc;
  for (int b = 0; b < engine.levels(); ++b)
    tc.boundaries.push_back(engine.boundary(config.outer, config.inner, b));
  tc.datapath = engine.datapath(config.vector_width);
  tc.maccs = macc_count(layer);
  return tc;
}

}  // namespace flexacc

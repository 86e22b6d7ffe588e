#include "flexacc/tiling.hpp"

#include <algorithm>

#include "flexacc/error.hpp"

namespace flexacc {

std::int64_t TileExtent::get(Dim d) const {
  switch (d) {
    case Dim::W: return w;
    case Dim::H: return h;
    case Dim::C: return c;
    case Dim::K: return k;
    case Dim::F: return f;
  }
  return 0;
}

void TileExtent::set(Dim d, std::int64_t v) {
  switch (d) {
    case Dim::W: w = v; break;
    case Dim::H: h = v; break;
    case Dim::C: c = v; break;
    case Dim::K: k = v; break;
    case Dim::F: f = v; break;
  }
}

TileExtent layer_extent(const LayerShape& layer) {
  auto o = output_shape(layer);
  return {o.W, o.H, layer.C, layer.K, o.F};
}

std::int64_t input_tile_extent(std::int64_t output_span, std::int64_t filter_extent,
                               std::int64_t stride) {
  return (output_span - 1) * stride + filter_extent;
}

std::int64_t halo_overlap(std::int64_t filter_extent, std::int64_t stride) {
  return std::max<std::int64_t>(0, filter_extent - stride);
}

TileExtent iteration_counts(const TileExtent& total, const TileExtent& tile) {
  TileExtent n;
  for (auto d : kAllDims) n.set(d, (total.get(d) + tile.get(d) - 1) / tile.get(d));
  return n;
}

TileExtent iteration_counts(const LayerShape& layer, const TileExtent& tile) {
  return iteration_counts(layer_extent(layer), tile);
}

std::int64_t filter_extent(const LayerShape& layer, Dim d) {
  switch (d) {
    case Dim::W: return layer.S;
    case Dim::H: return layer.R;
    case Dim::F: return layer.T;
    default: return 1;
  }
}

std::int64_t stride(const LayerShape& layer, Dim d) {
  switch (d) {
    case Dim::W: return layer.stride_w;
    case Dim::H: return layer.stride_h;
    case Dim::F: return layer.stride_f;
    default: return 1;
  }
}

std::int64_t tile_elements(const LayerShape& layer, const TileExtent& t, DataType type) {
  switch (type) {
    case DataType::Input:
      return input_tile_extent(t.w, layer.S, layer.stride_w) *
             input_tile_extent(t.h, layer.R, layer.stride_h) *
             input_tile_extent(t.f, layer.T, layer.stride_f) * t.c;
    case DataType::Filter: return layer.R * layer.S * layer.T * t.c * t.k;
    case DataType::Psum: return t.w * t.h * t.f * t.k;
  }
  return 0;
}

int element_bits(const LayerShape& layer, DataType type) {
  return type == DataType::Psum ? psum_bits(layer) : activation_bits(layer);
}

std::int64_t element_bytes(const LayerShape& layer, DataType type) {
  return (element_bits(layer, type) + 7) / 8;
}

std::vector<TileExtent> clipped_levels(const LayerShape& layer, const TileSpec& tiles) {
  std::vector<TileExtent> out;
  TileExtent parent = layer_extent(layer);
  for (const auto& t : tiles.levels) {
    TileExtent c;
    for (auto d : kAllDims) c.set(d, std::min(t.get(d), parent.get(d)));
    out.push_back(c);
    parent = c;
  }
  return out;
}

void validate_tiles(const LayerShape& layer, const TileSpec& tiles) {
  if (tiles.levels.empty()) throw ValidationError("tile spec has no levels");
  TileExtent parent = layer_extent(layer);
  for (std::size_t l = 0; l < tiles.levels.size(); ++l) {
    for (auto d : kAllDims) {
      auto v = tiles.levels[l].get(d);
      if (v < 1)
        throw ValidationError("tile " + std::string(1, dim_letter(d)) + " at level " +
                              std::to_string(l) + " must be >= 1");
      if (v > parent.get(d))
        throw ValidationError("tile " + std::string(1, dim_letter(d)) + " at level " +
                              std::to_string(l) + " exceeds its parent (" + std::to_string(v) +
                              " > " + std::to_string(parent.get(d)) + ")");
    }
    parent = tiles.levels[l];
  }
}

Metadata make_metadata(const LayerShape& layer, const TileSpec& tiles) {
  Metadata m;
  TileExtent parent = layer_extent(layer);
  for (const auto& t : clipped_levels(layer, tiles)) {
    m.iterations.push_back(iteration_counts(parent, t));
    m.tile_bytes.push_back({tile_elements(layer, t, DataType::Input) *
                                element_bytes(layer, DataType::Input),
                            tile_elements(layer, t, DataType::Filter) *
                                element_bytes(layer, DataType::Filter),
                            tile_elements(layer, t, DataType::Psum) *
                                element_bytes(layer, DataType::Psum)});
    parent = t;
  }
  for (auto d : kAllDims)
    m.halo[index(d)] = halo_overlap(filter_extent(layer, d), stride(layer, d));
  auto o = output_shape(layer);
  m.output_elements = o.F * o.K * o.W * o.H;
  return m;
}

}  // namespace flexacc

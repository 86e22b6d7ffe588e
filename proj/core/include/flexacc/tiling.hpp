#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "flexacc/layer.hpp"
#include "flexacc/loop_order.hpp"

namespace flexacc {

/// Extents of one tile. W, H and F count output positions; C and K count elements.
struct TileExtent {
  std::int64_t w = 1, h = 1, c = 1, k = 1, f = 1;

  std::int64_t get(Dim d) const;
  void set(Dim d, std::int64_t v);

  friend auto operator<=>(const TileExtent&, const TileExtent&) = default;
};

/// Per-dimension totals of the layer in tiling units (outputs for W/H/F).
TileExtent layer_extent(const LayerShape& layer);

/// Tiles for every on-chip level, outermost (last-level buffer) first.
struct TileSpec {
  std::vector<TileExtent> levels;
  friend auto operator<=>(const TileSpec&, const TileSpec&) = default;
};

/// Input elements spanned along one axis by `output_span` consecutive windows.
std::int64_t input_tile_extent(std::int64_t output_span, std::int64_t filter_extent,
                               std::int64_t stride);

/// Elements shared by two consecutive tiles along an axis; 0 for C and K.
std::int64_t halo_overlap(std::int64_t filter_extent, std::int64_t stride);

/// Per-dimension iteration counts: ceil(total / tile).
TileExtent iteration_counts(const TileExtent& total, const TileExtent& tile);
TileExtent iteration_counts(const LayerShape& layer, const TileExtent& tile);

/// Filter/stride pair along a tiled dimension (1/1 for C and K).
std::int64_t filter_extent(const LayerShape& layer, Dim d);
std::int64_t stride(const LayerShape& layer, Dim d);

/// Element count of a datatype's tile when the tile covers `tile` (already clipped).
std::int64_t tile_elements(const LayerShape& layer, const TileExtent& tile, DataType type);

/// Bits per stored element of a datatype.
int element_bits(const LayerShape& layer, DataType type);
std::int64_t element_bytes(const LayerShape& layer, DataType type);

/// Clips each level to its parent (and the top level to the layer).
std::vector<TileExtent> clipped_levels(const LayerShape& layer, const TileSpec& tiles);

/// Throws ValidationError unless 1 <= tile and each level nests inside its parent.
void validate_tiles(const LayerShape& layer, const TileSpec& tiles);

/// Derived bookkeeping for a tiled schedule.
struct Metadata {
  std::vector<TileExtent> iterations;  ///< total tiles per dim, per level
  std::vector<std::array<std::int64_t, 3>> tile_bytes;  ///< per level, per datatype
  std::array<std::int64_t, 5> halo{};                   ///< per dim, input elements
  std::int64_t output_elements = 0;
};

Metadata make_metadata(const LayerShape& layer, const TileSpec& tiles);

}  // namespace flexacc

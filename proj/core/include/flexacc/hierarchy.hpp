#pragma once

#include <cstdint>
#include <vector>

#include "flexacc/arch.hpp"
#include "flexacc/config.hpp"
#include "flexacc/energy.hpp"
#include "flexacc/layer.hpp"

namespace flexacc {

struct DepthResult {
  int depth = 0;
  double energy_pj = 0.0;
  double buffer_pj = 0.0;  ///< on-chip buffer accesses only
  Config config;
  std::vector<std::int64_t> buffer_bytes;  ///< sized to the chosen tiles, outermost first
};

struct DepthSweepOptions {
  int tile_points = 6;
  int banks = 16;
  int word_bits = 64;
  int max_depth = 4;
};

/// Lowest-energy schedule for each hierarchy depth 1..max_depth when every
/// buffer is sized to exactly hold (double-buffered) its tiles. Lower levels are
/// chosen greedily among min/max corners of their parent tile.
std::vector<DepthResult> sweep_hierarchy_depth(const LayerShape& layer, const ArchSpec& arch,
                                               const EnergyTable& table,
                                               const DepthSweepOptions& options = {});

/// Architecture whose buffers are sized to the given tiles.
ArchSpec sized_arch(const ArchSpec& base, const LayerShape& layer, const TileSpec& tiles,
                    const DepthSweepOptions& options);

}  // namespace flexacc

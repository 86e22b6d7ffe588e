#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "flexacc/config.hpp"
#include "flexacc/layer.hpp"
#include "flexacc/tiling.hpp"

namespace flexacc {

/// Transfers across one boundary for one datatype, in elements.
/// For psums, `fills` are reloads of partial sums (first visits start from
/// zero and are not fetched) and `writebacks` count every eviction upward,
/// final results included.
struct TransferCounts {
  std::int64_t fills = 0;
  std::int64_t fill_elements = 0;
  std::int64_t writebacks = 0;
  std::int64_t writeback_elements = 0;

  friend bool operator==(const TransferCounts&, const TransferCounts&) = default;
};

struct BoundaryTraffic {
  std::array<TransferCounts, 3> by_type{};

  const TransferCounts& operator[](DataType t) const { return by_type[index(t)]; }
  TransferCounts& operator[](DataType t) { return by_type[index(t)]; }
  friend bool operator==(const BoundaryTraffic&, const BoundaryTraffic&) = default;
};

/// Accesses between the innermost buffer and the MACC lanes.
struct DatapathCounts {
  std::int64_t input_reads = 0;   ///< one read feeds all lanes of a PE
  std::int64_t filter_reads = 0;  ///< one per MACC
  std::int64_t psum_reads = 0;    ///< accumulator reloads of partial sums
  std::int64_t psum_writes = 0;   ///< accumulator spills, final values included

  friend bool operator==(const DatapathCounts&, const DatapathCounts&) = default;
};

/// Boundary 0 is DRAM -> last-level buffer; boundary b feeds on-chip level b.
struct TrafficCounts {
  std::vector<BoundaryTraffic> boundaries;
  DatapathCounts datapath;
  std::int64_t maccs = 0;

  friend bool operator==(const TrafficCounts&, const TrafficCounts&) = default;
};

/// Test hook: perturbs the halo used for slide reuse.
struct TrafficOptions {
  std::int64_t halo_bias = 0;
};

/// Closed-form transfer counts for a fixed tile hierarchy. Construction
/// precomputes per-dimension tile histograms so several boundaries and loop
/// orders can be scored cheaply.
///
/// Semantics (shared with the functional simulator):
///  - a datatype is fetched whenever its tile region differs from the one
///    resident in the child buffer;
///  - an input fetch that moves the window forward along a single W/H/F axis
///    keeps the overlap with the previous tile;
///  - below the last-level buffer, residency does not survive a change of
///    last-level tile (each last-level round starts cold).
class TrafficEngine {
 public:
  TrafficEngine(const LayerShape& layer, std::span<const TileExtent> tiles,
                TrafficOptions options = {});

  int levels() const { return levels_; }
  BoundaryTraffic boundary(const LoopOrder& outer, const LoopOrder& inner, int boundary) const;
  TransferCounts transfers(const LoopOrder& outer, const LoopOrder& inner, int boundary,
                           DataType type) const;
  DatapathCounts datapath(int vector_width) const;

  /// Tiles of the given level along a dimension, as (extent, multiplicity).
  /// Level -1 is the whole layer.
  struct Piece {
    std::int64_t extent;
    std::int64_t count;
  };
  std::span<const Piece> pieces(Dim d, int level) const;
  std::int64_t tile_count(Dim d, int level) const;

  static constexpr int kMaxLevels = 8;

 private:
  // A level holds at most one more distinct tile extent than its parent.
  static constexpr int kMaxPieces = kMaxLevels + 2;
  struct PieceList {
    std::array<Piece, kMaxPieces> items;
    int size = 0;
  };
  struct DimProfile {
    // levels[0] is the whole extent; levels[l + 1] holds level l tiles.
    std::array<PieceList, kMaxLevels + 1> levels;
    std::array<std::int64_t, kMaxLevels + 1> counts{};
    std::array<std::int64_t, kMaxLevels> tile{};
    std::int64_t filter = 1;
    std::int64_t stride = 1;
    std::int64_t halo = 0;
  };

  std::int64_t g(DataType type, Dim d, std::int64_t extent) const;
  std::int64_t sum_g(DataType type, Dim d, int level) const;
  std::int64_t count_fitting(Dim d, int level, std::int64_t limit) const;
  std::int64_t sum_g_fitting(DataType type, Dim d, int level, std::int64_t limit) const;

  int levels_ = 0;
  TrafficOptions options_;
  std::int64_t rst_ = 1;
  std::int64_t maccs_ = 0;
  std::array<DimProfile, 5> dims_;
};

/// Transfers across the boundary feeding on-chip `level` (0 = from DRAM).
BoundaryTraffic traffic_model(const LayerShape& layer, const Config& config, int level,
                              const TrafficOptions& options = {});

/// Every boundary plus the datapath.
TrafficCounts traffic_model(const LayerShape& layer, const Config& config,
                            const TrafficOptions& options = {});

}  // namespace flexacc

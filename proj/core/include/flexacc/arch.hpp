#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "flexacc/config.hpp"
#include "flexacc/layer.hpp"

namespace flexacc {

struct BufferLevel {
  std::string name;
  std::int64_t bytes = 0;
  int banks = 1;
  int word_bits = 8;
  bool double_buffered = true;

  std::int64_t bank_bytes() const { return bytes / banks; }
  /// Bytes one datatype may occupy per bank once double buffering is accounted for.
  std::int64_t usable_bank_bytes() const {
    return double_buffered ? bank_bytes() / 2 : bank_bytes();
  }
  std::int64_t usable_bytes() const { return double_buffered ? bytes / 2 : bytes; }
};

/// Clusters of PEs over a banked buffer hierarchy. `levels` is outermost first
/// (L2, L1, L0 for the shipped design).
struct ArchSpec {
  std::string name;
  int clusters = 1;
  int pes_per_cluster = 1;
  int vector_width = 1;
  std::vector<BufferLevel> levels;
  /// bus_bits[b] feeds level b + 1 from level b (L2->L1, L1->L0, ...).
  std::vector<int> bus_bits;
  double clock_hz = 1e9;

  int total_pes() const { return clusters * pes_per_cluster; }
  void validate() const;
};

/// Contiguous bank ranges [begin, end) per datatype, inputs then filters then psums.
struct BankAssignment {
  std::array<int, 3> begin{};
  std::array<int, 3> end{};
  int banks = 0;

  int count(DataType t) const { return end[index(t)] - begin[index(t)]; }
  /// Owner of a bank, or -1 when the bank is unassigned.
  int owner(int bank) const;
};

/// Banks a datatype needs at a level for a tile of `bytes`.
int bank_demand(const BufferLevel& level, std::int64_t bytes);

/// Throws CapacityError when the demands exceed the level's bank count.
BankAssignment assign_banks_by_count(int total_banks, const std::array<int, 3>& demand);
BankAssignment assign_banks(const BufferLevel& level, const std::array<std::int64_t, 3>& tile_bytes);

/// Bank counts closest to the requested shares that fit the level: floor each
/// share, then hand the remaining banks out by largest fractional part.
std::array<int, 3> banks_from_shares(int total_banks, const std::array<double, 3>& shares);

/// Per-level bytes of each datatype's tile under a config.
std::vector<std::array<std::int64_t, 3>> tile_bytes_per_level(const LayerShape& layer,
                                                              const TileSpec& tiles);

/// Throws CapacityError naming level and datatype if any tile overflows its buffer.
void check_capacity(const LayerShape& layer, const TileSpec& tiles, const ArchSpec& arch);
bool fits(const LayerShape& layer, const TileSpec& tiles, const ArchSpec& arch);

/// Input bytes per cycle the L2->L1 bus must carry to keep every PE busy in
/// steady state with 1-byte activations.
double required_bus_bw(const ArchSpec& arch, const LayerShape& layer);

/// Mask schedule for the broadcast NoC.
struct PeMaskSchedule {
  std::vector<bool> steady_mask;  ///< over all PEs, cluster-major
  std::vector<bool> edge_mask;    ///< mask for the final round
  std::int64_t steady_active = 0;
  std::int64_t edge_active = 0;
  std::int64_t rounds = 0;
  /// Rounds along each axis and the residual width of the last one.
  std::array<std::int64_t, 4> rounds_per_axis{};    // h, w, k, f
  std::array<std::int64_t, 4> residual_per_axis{};  // h, w, k (in PEs), f
};

/// Assigns output work over the whole layer. Throws ValidationError on oversubscription.
PeMaskSchedule parallel_assignment(const Config& config, const ArchSpec& arch,
                                   const LayerShape& layer);

}  // namespace flexacc

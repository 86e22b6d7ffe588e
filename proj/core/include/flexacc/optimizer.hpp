#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flexacc/arch.hpp"
#include "flexacc/config.hpp"
#include "flexacc/cost.hpp"
#include "flexacc/energy.hpp"
#include "flexacc/layer.hpp"

namespace flexacc {

enum class Objective { Energy, Perf, PerfPerWatt };

Objective parse_objective(std::string_view text);
std::string_view to_string(Objective objective);

struct SearchOptions {
  int tile_points = 8;          ///< divisors kept per dimension for last-level tiles
  bool search_fp = false;       ///< also parallelize along F
  std::vector<LoopOrder> outer_orders;  ///< empty = all 120
  std::vector<LoopOrder> inner_orders;  ///< empty = all 120
  int threads = 1;
};

/// Divisors of `extent` subsampled evenly to at most `points`, always
/// including 1 and `extent` itself.
std::vector<std::int64_t> discretize(std::int64_t extent, int points);

/// Last-level tile candidates that pass the capacity and bank rules.
std::vector<TileExtent> candidate_top_tiles(const LayerShape& layer, const ArchSpec& arch,
                                            const SearchOptions& options);

/// (Hp, Wp, Kp[, Fp]) choices; Kp counts PEs, each holding vector_width lanes.
std::vector<Parallelism> candidate_parallelism(const LayerShape& layer, const ArchSpec& arch,
                                               const SearchOptions& options);

/// Streams every configuration of the cartesian product (orders x tiles x
/// parallelism) in deterministic order. Only the last-level tile is set;
/// lower levels are filled by complete_config. Throws SearchSpaceError when
/// no last-level tile is feasible.
void for_each_config(const LayerShape& layer, const ArchSpec& arch, const SearchOptions& options,
                     const std::function<void(const Config&)>& visit);
std::int64_t count_configs(const LayerShape& layer, const ArchSpec& arch,
                           const SearchOptions& options);
std::vector<Config> generate_configs(const LayerShape& layer, const ArchSpec& arch,
                                     const SearchOptions& options);

// --- memory allocation below the last-level buffer -------------------------

/// All 2^D min/max combinations over the given per-dimension (min, max) pairs,
/// max first: for two dims (max,max), (max,min), (min,max), (min,min).
/// Dimensions with min == max contribute a single value.
std::vector<TileExtent> corner_candidates(const TileExtent& min_tile, const TileExtent& max_tile);

/// Smallest legal sub-tile of `parent`: one output position and one filter,
/// but every channel of the parent tile (the R*S*C_t*T minimum).
TileExtent minimum_subtile(const TileExtent& parent);

/// Reuse of each datatype at `level` for a candidate tile hierarchy: accesses
/// the datapath makes divided by elements filled from the level above.
std::array<double, 3> f_reuse_per_type(const LayerShape& layer, std::span<const TileExtent> tiles,
                                       const LoopOrder& outer, const LoopOrder& inner, int level,
                                       int vector_width);

/// Energy-weighted aggregate of f_reuse_per_type, weighting each datatype's
/// demand and fills by the parent level's per-element access energy.
double f_reuse(const LayerShape& layer, std::span<const TileExtent> tiles, const LoopOrder& outer,
               const LoopOrder& inner, int level, const ArchSpec& arch, const EnergyTable& table);

/// Picks the tile for `level` (> 0) given its ancestors in `parents`. Throws
/// CapacityError when no corner fits.
TileExtent allocate(const LayerShape& layer, int level, std::span<const TileExtent> parents,
                    const LoopOrder& outer, const LoopOrder& inner, const ArchSpec& arch,
                    const EnergyTable& table);

/// Fills every level below the last-level buffer via allocate. Returns
/// nullopt when some level has no feasible allocation.
std::optional<Config> complete_config(const LayerShape& layer, const Config& config,
                                      const ArchSpec& arch, const EnergyTable& table);

// --- selection ---------------------------------------------------------------

struct LayerResult {
  std::string layer_name;
  Config config;
  CostReport report;
  std::int64_t examined = 0;
  std::int64_t discarded = 0;
};

/// Strict-weak ordering used for winner selection; ties fall back to the
/// lexicographically smallest config.
bool better(Objective objective, const CostReport& a, const Config& ca, const CostReport& b,
            const Config& cb);

/// Best config for one layer. Throws SearchSpaceError on an empty space.
LayerResult optimize_layer(const LayerShape& layer, const ArchSpec& arch, const EnergyTable& table,
                           Objective objective, const SearchOptions& options = {});

struct NetworkResult {
  std::vector<LayerResult> layers;
  double total_energy_pj = 0.0;
  std::int64_t total_cycles = 0;
  std::int64_t total_maccs = 0;
};

NetworkResult optimize_network(const Network& network, const ArchSpec& arch,
                               const EnergyTable& table, Objective objective,
                               const SearchOptions& options = {});

/// Static bank split per on-chip level (inputs, filters, psums).
struct StaticPartition {
  std::string label;
  std::vector<std::array<int, 3>> banks;
};

/// Default static partitions tried by the fixed baseline: the published split
/// rounded to banks plus an even-bank grid over the last-level buffer.
std::vector<StaticPartition> default_partitions(const ArchSpec& arch);

struct BaselineResult {
  LoopOrder outer;
  LoopOrder inner;
  StaticPartition partition;
  std::vector<LayerResult> layers;
  double total_energy_pj = 0.0;
  std::int64_t total_cycles = 0;
};

/// One uniform (outer, inner, partition) for every layer, chosen to minimise
/// total network energy; tiles and parallelism remain per layer within that
/// partition. Throws SearchSpaceError if no uniform choice fits every layer.
BaselineResult baseline_fixed(const Network& network, const ArchSpec& arch,
                              const EnergyTable& table, const SearchOptions& options = {},
                              std::vector<StaticPartition> partitions = {});

/// Per-layer optimum and the uniform baseline from a single search pass.
struct NetworkComparison {
  NetworkResult optimized;
  BaselineResult baseline;
};

NetworkComparison compare_network(const Network& network, const ArchSpec& arch,
                                  const EnergyTable& table, Objective objective,
                                  const SearchOptions& options = {},
                                  std::vector<StaticPartition> partitions = {});

// --- per-axis sweeps ---------------------------------------------------------

struct OrderSweepRow {
  std::string layer;
  std::string order;  ///< letters, or "Opt"
  double energy_pj = 0.0;
  double dram_pj = 0.0;
};

/// Best energy per layer with the outer (or inner) order pinned, plus an "Opt" row.
std::vector<OrderSweepRow> sweep_orders(const Network& network, const ArchSpec& arch,
                                        const EnergyTable& table, bool outer,
                                        const SearchOptions& options = {});

struct AllocationRow {
  std::string layer;
  std::array<double, 3> l2_share{};  ///< fraction of usable last-level bytes per datatype
  std::array<std::int64_t, 3> l2_bytes{};
};

std::vector<AllocationRow> sweep_allocation(const Network& network, const ArchSpec& arch,
                                            const EnergyTable& table,
                                            const SearchOptions& options = {});

}  // namespace flexacc

#pragma once

#include <cstdint>
#include <vector>

#include "flexacc/arch.hpp"
#include "flexacc/config.hpp"
#include "flexacc/energy.hpp"
#include "flexacc/layer.hpp"
#include "flexacc/traffic.hpp"

namespace flexacc {

/// Energy in picojoules. `offchip_side` collects the terms that depend only on
/// the DRAM<->last-level traffic; `onchip_side` the rest. `total_pj` is their sum.
struct EnergyBreakdown {
  double dram = 0.0;
  std::vector<double> levels;  ///< per on-chip level, outermost first
  double noc = 0.0;
  double compute = 0.0;
  double offchip_side = 0.0;
  double onchip_side = 0.0;
  double total_pj = 0.0;

  double component_sum() const;
};

struct CostReport {
  EnergyBreakdown energy;
  std::int64_t cycles = 0;
  double utilization = 0.0;
  double perf_per_watt = 0.0;  ///< MACC/s per W
  std::int64_t maccs = 0;
};

/// Energy split used by the optimizer to score the two halves independently.
struct EnergySides {
  double dram = 0.0;
  std::vector<double> offchip_levels;  ///< top-level accesses caused by DRAM traffic
  double offchip = 0.0;
};

/// Energy of touching one element of `type` in `level`; elements wider than a
/// word cost whole words.
double access_energy_pj(const LayerShape& layer, const BufferLevel& level,
                        const EnergyTable& table, DataType type);

/// DRAM-side energy of boundary 0 alone.
EnergySides offchip_energy(const BoundaryTraffic& dram_boundary, const LayerShape& layer,
                           const ArchSpec& arch, const EnergyTable& table);

/// Everything except the DRAM boundary, including static NoC energy for `cycles`.
EnergyBreakdown onchip_energy(const TrafficCounts& counts, const LayerShape& layer,
                              const ArchSpec& arch, const EnergyTable& table,
                              std::int64_t cycles);

/// Linear energy model over all traffic.
EnergyBreakdown energy(const TrafficCounts& counts, const LayerShape& layer, const ArchSpec& arch,
                       const EnergyTable& table, std::int64_t cycles);

/// Combines the two halves; `total_pj = offchip + onchip` exactly as the optimizer does.
EnergyBreakdown combine(const EnergySides& offchip, const EnergyBreakdown& onchip);

/// Per last-level round inputs of the cycle model.
struct RoundClass {
  TileExtent extent;              ///< the round's clipped last-level tile
  std::int64_t multiplicity = 0;  ///< how many rounds have this shape
  std::vector<std::int64_t> bus_bytes;  ///< per on-chip boundary below the top
};

/// Enumerates last-level tile shapes with their on-chip bus traffic.
std::vector<RoundClass> round_classes(const LayerShape& layer, const Config& config,
                                      const ArchSpec& arch);

/// Cycles for the given rounds under a parallelism choice.
std::int64_t cycles_for(const std::vector<RoundClass>& rounds, const LayerShape& layer,
                        const Parallelism& par, int vector_width, const ArchSpec& arch);

struct CycleEstimate {
  std::int64_t cycles = 0;
  double utilization = 0.0;
};

/// Sum over last-level rounds of max(compute, bus) cycles.
CycleEstimate cycles(const LayerShape& layer, const Config& config, const ArchSpec& arch);

/// MACC/s per W given the report's energy; 0 when energy or cycles is zero.
double perf_per_watt(const CostReport& report, double clock_hz);

/// Full evaluation of a complete config.
CostReport evaluate(const LayerShape& layer, const Config& config, const ArchSpec& arch,
                    const EnergyTable& table);

}  // namespace flexacc

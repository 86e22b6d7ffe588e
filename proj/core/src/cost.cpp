#include "flexacc/cost.hpp"

#include <algorithm>
#include <numeric>

#include "flexacc/error.hpp"

namespace flexacc {
namespace {

std::int64_t moved(const TransferCounts& t) { return t.fill_elements + t.writeback_elements; }

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

double access_energy_pj(const LayerShape& layer, const BufferLevel& level,
                        const EnergyTable& table, DataType type) {
  const std::int64_t bits = element_bits(layer, type);
  const std::int64_t word = level.word_bits;
  const std::int64_t accessed = bits <= word ? bits : (bits + word - 1) / word * word;
  return static_cast<double>(accessed) * table.sram_pj_per_bit(level.bank_bytes());
}

double EnergyBreakdown::component_sum() const {
  return dram + std::accumulate(levels.begin(), levels.end(), 0.0) + noc + compute;
}

EnergySides offchip_energy(const BoundaryTraffic& dram_boundary, const LayerShape& layer,
                           const ArchSpec& arch, const EnergyTable& table) {
  EnergySides s;
  s.offchip_levels.assign(arch.levels.size(), 0.0);
  // Finished outputs leave the chip requantized to activation width; only
  // partial sums travel at full accumulator width.
  const auto o = output_shape(layer);
  const std::int64_t finals = o.F * o.K * o.W * o.H;
  for (auto t : kAllDataTypes) {
    const auto n = static_cast<double>(moved(dram_boundary[t]));
    if (t == DataType::Psum) {
      const auto done = std::min(moved(dram_boundary[t]), finals);
      const auto partial = static_cast<double>(moved(dram_boundary[t]) - done);
      s.dram += (partial * element_bits(layer, t) +
                 static_cast<double>(done) * activation_bits(layer)) *
                table.dram_pj_per_bit;
    } else {
      s.dram += n * element_bits(layer, t) * table.dram_pj_per_bit;
    }
    s.offchip_levels[0] += n * access_energy_pj(layer, arch.levels[0], table, t);
  }
  s.offchip = s.dram + s.offchip_levels[0];
  return s;
}

EnergyBreakdown onchip_energy(const TrafficCounts& counts, const LayerShape& layer,
                              const ArchSpec& arch, const EnergyTable& table,
                              std::int64_t cycles) {
  const int levels = static_cast<int>(arch.levels.size());
  if (static_cast<int>(counts.boundaries.size()) != levels)
    throw ValidationError("traffic counts do not match the architecture depth");
  EnergyBreakdown e;
  e.levels.assign(levels, 0.0);
  for (int b = 1; b < levels; ++b)
    for (auto t : kAllDataTypes) {
      const auto n = static_cast<double>(moved(counts.boundaries[b][t]));
      e.levels[b - 1] += n * access_energy_pj(layer, arch.levels[b - 1], table, t);
      e.levels[b] += n * access_energy_pj(layer, arch.levels[b], table, t);
      e.noc += n * static_cast<double>(element_bytes(layer, t)) * table.noc_pj_per_byte;
    }
  const auto& bottom = arch.levels[levels - 1];
  const auto& dp = counts.datapath;
  e.levels[levels - 1] +=
      static_cast<double>(dp.input_reads) * access_energy_pj(layer, bottom, table, DataType::Input) +
      static_cast<double>(dp.filter_reads) * access_energy_pj(layer, bottom, table, DataType::Filter) +
      static_cast<double>(dp.psum_reads + dp.psum_writes) *
          access_energy_pj(layer, bottom, table, DataType::Psum);
  e.compute = static_cast<double>(counts.maccs) * table.macc_pj;
  e.noc += table.noc_pj_per_cycle_per_link * static_cast<double>(cycles) * (1.0 + arch.clusters);
  e.onchip_side = std::accumulate(e.levels.begin(), e.levels.end(), 0.0) + e.noc + e.compute;
  e.total_pj = e.onchip_side;
  return e;
}

EnergyBreakdown combine(const EnergySides& offchip, const EnergyBreakdown& onchip) {
  EnergyBreakdown e = onchip;
  e.dram = offchip.dram;
  for (std::size_t l = 0; l < e.levels.size() && l < offchip.offchip_levels.size(); ++l)
    e.levels[l] += offchip.offchip_levels[l];
  e.offchip_side = offchip.offchip;
  e.total_pj = offchip.offchip + onchip.onchip_side;
  return e;
}

EnergyBreakdown energy(const TrafficCounts& counts, const LayerShape& layer, const ArchSpec& arch,
                       const EnergyTable& table, std::int64_t cycles) {
  if (counts.boundaries.empty()) throw ValidationError("traffic counts have no boundaries");
  return combine(offchip_energy(counts.boundaries[0], layer, arch, table),
                 onchip_energy(counts, layer, arch, table, cycles));
}

std::vector<RoundClass> round_classes(const LayerShape& layer, const Config& config,
                                      const ArchSpec& arch) {
  TrafficEngine whole(layer, config.tiles.levels);
  const int levels = whole.levels();
  if (levels != static_cast<int>(arch.levels.size()))
    throw ValidationError("config depth does not match the architecture");
  const TileExtent first_top = clipped_levels(layer, config.tiles)[0];
  std::array<std::span<const TrafficEngine::Piece>, 5> top;
  for (auto d : kAllDims) top[index(d)] = whole.pieces(d, 0);
  const auto psum_bytes = element_bytes(layer, DataType::Psum);

  std::vector<RoundClass> out;
  std::array<std::size_t, 5> pick{};
  while (true) {
    RoundClass rc;
    std::int64_t mult = 1;
    for (auto d : kAllDims) {
      const auto& p = top[index(d)][pick[index(d)]];
      rc.extent.set(d, p.extent);
      mult *= p.count;
    }
    LayerShape sub = layer;
    sub.W = input_tile_extent(rc.extent.w, layer.S, layer.stride_w);
    sub.H = input_tile_extent(rc.extent.h, layer.R, layer.stride_h);
    sub.F = input_tile_extent(rc.extent.f, layer.T, layer.stride_f);
    sub.C = rc.extent.c;
    sub.K = rc.extent.k;
    std::vector<TileExtent> tiles = config.tiles.levels;
    tiles[0] = rc.extent;
    TrafficEngine engine(sub, tiles);
    rc.bus_bytes.assign(levels - 1, 0);
    for (int b = 1; b < levels; ++b) {
      auto bt = engine.boundary(config.inner, config.inner, b);
      for (auto t : kAllDataTypes)
        rc.bus_bytes[b - 1] += moved(bt[t]) * element_bytes(layer, t);
    }
    // Rounds after the first C tile find their psums already started, so the
    // first visit of every psum tile is a reload too.
    const std::int64_t reloaded = rc.extent.w * rc.extent.h * rc.extent.f * rc.extent.k;
    const std::int64_t c_count = top[index(Dim::C)][pick[index(Dim::C)]].count;
    const std::int64_t first_c = rc.extent.c == first_top.c ? mult / c_count : 0;
    if (first_c > 0) {
      RoundClass head = rc;
      head.multiplicity = first_c;
      out.push_back(head);
    }
    if (mult - first_c > 0) {
      rc.multiplicity = mult - first_c;
      for (int b = 1; b < levels; ++b) rc.bus_bytes[b - 1] += reloaded * psum_bytes;
      out.push_back(rc);
    }
    int d = 4;
    while (d >= 0 && ++pick[d] == top[d].size()) pick[d--] = 0;
    if (d < 0) break;
  }
  return out;
}

std::int64_t cycles_for(const std::vector<RoundClass>& rounds, const LayerShape& layer,
                        const Parallelism& par, int vector_width, const ArchSpec& arch) {
  const std::int64_t rst = layer.R * layer.S * layer.T;
  std::int64_t total = 0;
  for (const auto& rc : rounds) {
    const auto& e = rc.extent;
    std::int64_t round = ceil_div(e.h, par.hp) * ceil_div(e.w, par.wp) * ceil_div(e.f, par.fp) *
                         ceil_div(e.k, par.kp * vector_width) * e.c * rst;
    for (std::size_t b = 0; b < rc.bus_bytes.size(); ++b) {
      std::int64_t lanes = arch.bus_bits[b];
      if (b > 0) lanes *= arch.clusters;  // one L1->L0 bus per cluster
      round = std::max(round, ceil_div(rc.bus_bytes[b] * 8, lanes));
    }
    total += rc.multiplicity * round;
  }
  return total;
}

CycleEstimate cycles(const LayerShape& layer, const Config& config, const ArchSpec& arch) {
  CycleEstimate c;
  c.cycles = cycles_for(round_classes(layer, config, arch), layer, config.parallelism,
                        config.vector_width, arch);
  const double lanes = static_cast<double>(arch.total_pes()) * config.vector_width;
  c.utilization = c.cycles > 0 ? static_cast<double>(macc_count(layer)) /
                                     (static_cast<double>(c.cycles) * lanes)
                               : 0.0;
  return c;
}

double perf_per_watt(const CostReport& report, double clock_hz) {
  if (report.cycles <= 0 || !(report.energy.total_pj > 0) || !(clock_hz > 0)) return 0.0;
  const double seconds = static_cast<double>(report.cycles) / clock_hz;
  const double ops_per_s = static_cast<double>(report.maccs) / seconds;
  const double watts = report.energy.total_pj * 1e-12 / seconds;
  return ops_per_s / watts;
}

CostReport evaluate(const LayerShape& layer, const Config& config, const ArchSpec& arch,
                    const EnergyTable& table) {
  layer.validate();
  validate_tiles(layer, config.tiles);
  check_capacity(layer, config.tiles, arch);
  parallel_assignment(config, arch, layer);
  const auto counts = traffic_model(layer, config);
  const auto cyc = cycles(layer, config, arch);
  CostReport r;
  r.cycles = cyc.cycles;
  r.utilization = cyc.utilization;
  r.maccs = counts.maccs;
  r.energy = energy(counts, layer, arch, table, cyc.cycles);
  r.perf_per_watt = perf_per_watt(r, arch.clock_hz);
  return r;
}

}  // namespace flexacc

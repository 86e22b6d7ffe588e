#include "flexacc/arch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flexacc/error.hpp"

namespace flexacc {

void ArchSpec::validate() const {
  if (clusters < 1) throw ValidationError("clusters must be >= 1");
  if (pes_per_cluster < 1) throw ValidationError("pes_per_cluster must be >= 1");
  if (vector_width < 1) throw ValidationError("vector_width must be >= 1");
  if (levels.empty()) throw ValidationError("architecture has no buffer levels");
  for (const auto& l : levels) {
    if (l.bytes < 1) throw ValidationError("level " + l.name + ": bytes must be >= 1");
    if (l.banks < 1) throw ValidationError("level " + l.name + ": banks must be >= 1");
    if (l.bytes % l.banks != 0)
      throw ValidationError("level " + l.name + ": banks must divide bytes");
    if (l.word_bits < 1) throw ValidationError("level " + l.name + ": word_bits must be >= 1");
    if (l.usable_bank_bytes() < 1)
      throw ValidationError("level " + l.name + ": banks too small to double buffer");
  }
  if (bus_bits.size() + 1 != levels.size())
    throw ValidationError("expected " + std::to_string(levels.size() - 1) +
                          " bus widths (one per on-chip boundary), got " +
                          std::to_string(bus_bits.size()));
  for (auto b : bus_bits)
    if (b < 1) throw ValidationError("bus widths must be >= 1 bit");
  if (!(clock_hz > 0)) throw ValidationError("clock_hz must be > 0");
}

int BankAssignment::owner(int bank) const {
  for (int t = 0; t < 3; ++t)
    if (bank >= begin[t] && bank < end[t]) return t;
  return -1;
}

int bank_demand(const BufferLevel& level, std::int64_t bytes) {
  auto per_bank = level.usable_bank_bytes();
  if (per_bank < 1) throw CapacityError("level " + level.name + " has no usable bank bytes");
  return static_cast<int>((bytes + per_bank - 1) / per_bank);
}

BankAssignment assign_banks_by_count(int total_banks, const std::array<int, 3>& demand) {
  int sum = demand[0] + demand[1] + demand[2];
  if (sum > total_banks)
    throw CapacityError("bank demand " + std::to_string(demand[0]) + "+" +
                        std::to_string(demand[1]) + "+" + std::to_string(demand[2]) +
                        " exceeds " + std::to_string(total_banks) + " banks");
  BankAssignment a;
  a.banks = total_banks;
  int next = 0;
  for (int t = 0; t < 3; ++t) {
    a.begin[t] = next;
    next += demand[t];
    a.end[t] = next;
  }
  return a;
}

BankAssignment assign_banks(const BufferLevel& level,
                            const std::array<std::int64_t, 3>& tile_bytes) {
  std::array<int, 3> demand{};
  for (int t = 0; t < 3; ++t) demand[t] = bank_demand(level, tile_bytes[t]);
  try {
    return assign_banks_by_count(level.banks, demand);
  } catch (const CapacityError& e) {
    throw CapacityError("level " + level.name + ": " + e.what());
  }
}

std::array<int, 3> banks_from_shares(int total_banks, const std::array<double, 3>& shares) {
  double sum = shares[0] + shares[1] + shares[2];
  if (!(sum > 0)) throw ValidationError("bank shares must be positive");
  std::array<int, 3> banks{};
  std::array<double, 3> frac{};
  int used = 0;
  for (int t = 0; t < 3; ++t) {
    double raw = shares[t] / sum * total_banks;
    banks[t] = static_cast<int>(std::floor(raw));
    frac[t] = raw - banks[t];
    used += banks[t];
  }
  std::array<int, 3> rank = {0, 1, 2};
  std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  for (int i = 0; used < total_banks; i = (i + 1) % 3, ++used) banks[rank[i]]++;
  return banks;
}

std::vector<std::array<std::int64_t, 3>> tile_bytes_per_level(const LayerShape& layer,
                                                              const TileSpec& tiles) {
  std::vector<std::array<std::int64_t, 3>> out;
  for (const auto& t : clipped_levels(layer, tiles)) {
    std::array<std::int64_t, 3> b{};
    for (auto d : kAllDataTypes)
      b[index(d)] = tile_elements(layer, t, d) * element_bytes(layer, d);
    out.push_back(b);
  }
  return out;
}

void check_capacity(const LayerShape& layer, const TileSpec& tiles, const ArchSpec& arch) {
  if (tiles.levels.size() != arch.levels.size())
    throw ValidationError("config has " + std::to_string(tiles.levels.size()) +
                          " tile levels but the architecture has " +
                          std::to_string(arch.levels.size()));
  auto bytes = tile_bytes_per_level(layer, tiles);
  for (std::size_t l = 0; l < bytes.size(); ++l) {
    const auto& level = arch.levels[l];
    std::array<int, 3> demand{};
    int sum = 0;
    for (int t = 0; t < 3; ++t) sum += demand[t] = bank_demand(level, bytes[l][t]);
    if (sum > level.banks) {
      int worst = static_cast<int>(std::max_element(demand.begin(), demand.end()) - demand.begin());
      throw CapacityError("level " + level.name + ": tiles need " + std::to_string(sum) +
                          " banks but only " + std::to_string(level.banks) + " exist (" +
                          std::string(to_string(static_cast<DataType>(worst))) + " needs " +
                          std::to_string(demand[worst]) + ")");
    }
  }
}

bool fits(const LayerShape& layer, const TileSpec& tiles, const ArchSpec& arch) {
  try {
    check_capacity(layer, tiles, arch);
    return true;
  } catch (const CapacityError&) {
    return false;
  }
}

double required_bus_bw(const ArchSpec& arch, const LayerShape& layer) {
  return static_cast<double>(arch.total_pes()) /
         static_cast<double>(layer.R * layer.S * layer.T);
}

PeMaskSchedule parallel_assignment(const Config& config, const ArchSpec& arch,
                                   const LayerShape& layer) {
  const auto& p = config.parallelism;
  if (p.hp < 1 || p.wp < 1 || p.kp < 1 || p.fp < 1)
    throw ValidationError("parallelism factors must be >= 1");
  if (p.pes() > arch.total_pes())
    throw ValidationError("parallelism " + std::to_string(p.pes()) + " PEs exceeds " +
                          std::to_string(arch.total_pes()) + " available");
  auto o = output_shape(layer);
  const std::int64_t vw = std::max(1, config.vector_width);
  const std::array<std::int64_t, 4> work = {o.H, o.W, (o.K + vw - 1) / vw, o.F};
  const std::array<std::int64_t, 4> width = {p.hp, p.wp, p.kp, p.fp};

  PeMaskSchedule s;
  s.rounds = 1;
  for (int a = 0; a < 4; ++a) {
    s.rounds_per_axis[a] = (work[a] + width[a] - 1) / width[a];
    s.residual_per_axis[a] = std::min(width[a], work[a] - (s.rounds_per_axis[a] - 1) * width[a]);
    s.rounds *= s.rounds_per_axis[a];
  }
  s.steady_mask.assign(arch.total_pes(), false);
  s.edge_mask.assign(arch.total_pes(), false);
  for (std::int64_t h = 0; h < p.hp; ++h)
    for (std::int64_t w = 0; w < p.wp; ++w)
      for (std::int64_t k = 0; k < p.kp; ++k)
        for (std::int64_t f = 0; f < p.fp; ++f) {
          auto pe = static_cast<std::size_t>(((h * p.wp + w) * p.kp + k) * p.fp + f);
          s.steady_mask[pe] = true;
          bool edge = h < s.residual_per_axis[0] && w < s.residual_per_axis[1] &&
                      k < s.residual_per_axis[2] && f < s.residual_per_axis[3];
          s.edge_mask[pe] = edge;
        }
  s.steady_active = p.pes();
  s.edge_active = s.residual_per_axis[0] * s.residual_per_axis[1] * s.residual_per_axis[2] *
                  s.residual_per_axis[3];
  return s;
}

}  // namespace flexacc

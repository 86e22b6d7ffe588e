#pragma once

#include <filesystem>
#include <string>

#include "flexacc/arch.hpp"
#include "flexacc/energy.hpp"
#include "flexacc/layer.hpp"

namespace flexacc::test {

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(FLEXACC_DATA_DIR) / name;
}

inline LayerShape layer(std::int64_t W, std::int64_t H, std::int64_t C, std::int64_t F,
                        std::int64_t K, std::int64_t R = 1, std::int64_t S = 1,
                        std::int64_t T = 1) {
  LayerShape l;
  l.name = "l";
  l.W = W, l.H = H, l.C = C, l.F = F, l.K = K;
  l.R = R, l.S = S, l.T = T;
  return l;
}

// Roomy buffers so tile choice never trips capacity.
inline ArchSpec roomy_arch(int levels, int clusters = 1, int pes = 4, int vw = 1) {
  ArchSpec a;
  a.name = "roomy";
  a.clusters = clusters;
  a.pes_per_cluster = pes;
  a.vector_width = vw;
  for (int l = 0; l < levels; ++l) {
    a.levels.push_back({"L" + std::to_string(levels - 1 - l), 3 << 20, 3, 8, false});
    if (l > 0) a.bus_bits.push_back(64);
  }
  return a;
}

inline EnergyTable flat_table(double sram_pj_per_bit = 0.01) {
  EnergyTable t;
  t.name = "flat";
  t.dram_pj_per_bit = 20.0;
  t.sram = {{1, sram_pj_per_bit}, {std::int64_t{1} << 40, sram_pj_per_bit}};
  return t;
}

}  // namespace flexacc::test

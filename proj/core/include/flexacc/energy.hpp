#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flexacc {

/// Per-access energy for an SRAM bank no larger than `bank_bytes`.
struct SramEnergy {
  std::int64_t bank_bytes = 0;
  double pj_per_bit = 0.0;
};

/// Linear energy constants. SRAM entries are a step table sorted by bank size.
struct EnergyTable {
  std::string name;
  double dram_pj_per_bit = 20.0;
  double macc_pj = 0.0;
  double noc_pj_per_byte = 0.0;
  double noc_pj_per_cycle_per_link = 0.0;
  std::vector<SramEnergy> sram;

  /// Smallest entry whose bank size is >= bank_bytes. Throws ValidationError
  /// ("missing table entry") when the bank is larger than every entry.
  double sram_pj_per_bit(std::int64_t bank_bytes) const;
  void validate() const;
};

}  // namespace flexacc

#include "flexacc/energy.hpp"

#include "flexacc/error.hpp"

namespace flexacc {

double EnergyTable::sram_pj_per_bit(std::int64_t bank_bytes) const {
  for (const auto& e : sram)
    if (e.bank_bytes >= bank_bytes) return e.pj_per_bit;
  throw ValidationError("missing table entry: no SRAM energy for a " + std::to_string(bank_bytes) +
                        "-byte bank in table '" + name + "'");
}

void EnergyTable::validate() const {
  if (dram_pj_per_bit < 0) throw ValidationError("dram_pj_per_bit must be >= 0");
  if (macc_pj < 0) throw ValidationError("macc_pj must be >= 0");
  if (noc_pj_per_byte < 0) throw ValidationError("noc_pj_per_byte must be >= 0");
  if (noc_pj_per_cycle_per_link < 0)
    throw ValidationError("noc_pj_per_cycle_per_link must be >= 0");
  for (std::size_t i = 0; i < sram.size(); ++i) {
    if (sram[i].bank_bytes < 1) throw ValidationError("sram bank_bytes must be >= 1");
    if (sram[i].pj_per_bit < 0) throw ValidationError("sram pj_per_bit must be >= 0");
    if (i > 0 && sram[i].bank_bytes <= sram[i - 1].bank_bytes)
      throw ValidationError("sram entries must be sorted by increasing bank_bytes");
    if (i > 0 && sram[i].pj_per_bit < sram[i - 1].pj_per_bit)
      throw ValidationError("sram pj_per_bit must not decrease with bank size");
  }
}

}  // namespace flexacc

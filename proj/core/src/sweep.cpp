#include "flexacc/error.hpp"
#include "flexacc/optimizer.hpp"
#include "search_table.hpp"

namespace flexacc {

std::vector<OrderSweepRow> sweep_orders(const Network& network, const ArchSpec& arch,
                                        const EnergyTable& table, bool outer,
                                        const SearchOptions& options) {
  if (network.layers.empty()) throw ValidationError("no layers selected for the sweep");
  std::vector<OrderSweepRow> rows;
  for (const auto& layer : network.layers) {
    const auto lt = detail::build_table(layer, arch, table, options, options.threads);
    const auto& orders = outer ? lt.outer : lt.inner;
    auto emit = [&](const std::string& name, const std::vector<std::size_t>& only) {
      detail::Pick p;
      if (!detail::pick(lt, Objective::Energy, outer ? only : std::vector<std::size_t>{},
                        outer ? std::vector<std::size_t>{} : only, p))
        return;
      const auto r = detail::realize(lt, p, arch, table);
      rows.push_back({layer.name, name, r.report.energy.total_pj, r.report.energy.dram});
    };
    for (std::size_t k = 0; k < orders.size(); ++k)
      emit(orders[k].to_string(!outer), {k});
    emit("Opt", {});
  }
  return rows;
}

std::vector<AllocationRow> sweep_allocation(const Network& network, const ArchSpec& arch,
                                            const EnergyTable& table,
                                            const SearchOptions& options) {
  if (network.layers.empty()) throw ValidationError("no layers selected for the sweep");
  std::vector<AllocationRow> rows;
  const double usable = static_cast<double>(arch.levels.at(0).usable_bytes());
  for (const auto& layer : network.layers) {
    const auto r = optimize_layer(layer, arch, table, Objective::Energy, options);
    AllocationRow row;
    row.layer = layer.name;
    const auto bytes = tile_bytes_per_level(layer, r.config.tiles)[0];
    for (int t = 0; t < 3; ++t) {
      row.l2_bytes[t] = bytes[t];
      row.l2_share[t] = static_cast<double>(bytes[t]) / usable;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace flexacc

#include <algorithm>
#include <limits>
#include <set>

#include "flexacc/error.hpp"
#include "flexacc/optimizer.hpp"
#include "search_table.hpp"

namespace flexacc {
namespace {

bool compatible(const detail::InnerEval& ev, const StaticPartition& p) {
  for (std::size_t l = 0; l < ev.bank_demand.size(); ++l)
    for (int t = 0; t < 3; ++t)
      if (ev.bank_demand[l][t] > p.banks[l][t]) return false;
  return true;
}

std::string label(const std::vector<std::array<int, 3>>& banks) {
  std::string s;
  for (const auto& b : banks) {
    if (!s.empty()) s += '/';
    s += std::to_string(b[0]) + ':' + std::to_string(b[1]) + ':' + std::to_string(b[2]);
  }
  return s;
}

}  // namespace

std::vector<StaticPartition> default_partitions(const ArchSpec& arch) {
  arch.validate();
  // Published static split: the last-level buffer favours psums and inputs,
  // the cluster and PE buffers hold mostly filters and inputs.
  const std::array<double, 3> top_share{38.5, 21.5, 40.0};
  const std::array<double, 3> lower_share{40.0, 50.0, 10.0};
  const std::array<double, 3> variants[] = {
      {2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {1, 1, 1}};

  std::vector<std::array<int, 3>> lower;
  for (std::size_t l = 1; l < arch.levels.size(); ++l)
    lower.push_back(banks_from_shares(arch.levels[l].banks, lower_share));

  std::vector<StaticPartition> out;
  std::set<std::vector<std::array<int, 3>>> seen;
  auto add = [&](const std::array<double, 3>& share) {
    std::vector<std::array<int, 3>> banks{banks_from_shares(arch.levels[0].banks, share)};
    banks.insert(banks.end(), lower.begin(), lower.end());
    if (seen.insert(banks).second) out.push_back({label(banks), banks});
  };
  add(top_share);
  for (const auto& v : variants) add(v);
  return out;
}

namespace {

std::vector<detail::LayerTable> build_tables(const Network& network, const ArchSpec& arch,
                                             const EnergyTable& table,
                                             const SearchOptions& options) {
  if (network.layers.empty()) throw ValidationError("network has no layers");
  std::vector<detail::LayerTable> tables;
  for (const auto& layer : network.layers)
    tables.push_back(detail::build_table(layer, arch, table, options, options.threads));
  return tables;
}

BaselineResult baseline_from_tables(const std::vector<detail::LayerTable>& tables,
                                    const ArchSpec& arch, const EnergyTable& table,
                                    std::vector<StaticPartition> partitions) {
  if (partitions.empty()) partitions = default_partitions(arch);
  for (const auto& p : partitions)
    if (p.banks.size() != arch.levels.size())
      throw ValidationError("partition '" + p.label + "' does not match the architecture depth");
  const std::size_t n_outer = tables[0].outer.size();
  const std::size_t n_inner = tables[0].inner.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // best[p][i][o]: network energy of the uniform choice, summed in layer order.
  std::vector<double> best(partitions.size() * n_inner * n_outer, 0.0);
  std::vector<double> layer_min(n_outer);
  for (const auto& lt : tables) {
    // Offchip scores laid out per top tile so the inner loop runs over outer orders.
    for (std::size_t p = 0; p < partitions.size(); ++p)
      for (std::size_t i = 0; i < n_inner; ++i) {
        std::fill(layer_min.begin(), layer_min.end(), kInf);
        for (std::size_t t = 0; t < lt.tops.size(); ++t) {
          const auto& ev = lt.eval(t, i);
          if (!ev.feasible || !compatible(ev, partitions[p])) continue;
          const auto& a = lt.tops[t].offchip;
          for (std::size_t o = 0; o < n_outer; ++o)
            layer_min[o] = std::min(layer_min[o], a[o] + ev.energy);
        }
        double* row = &best[(p * n_inner + i) * n_outer];
        for (std::size_t o = 0; o < n_outer; ++o) row[o] += layer_min[o];
      }
  }

  std::size_t bp = 0, bi = 0, bo = 0;
  double bval = kInf;
  for (std::size_t o = 0; o < n_outer; ++o)
    for (std::size_t i = 0; i < n_inner; ++i)
      for (std::size_t p = 0; p < partitions.size(); ++p) {
        const double v = best[(p * n_inner + i) * n_outer + o];
        if (v < bval) {
          bval = v;
          bp = p;
          bi = i;
          bo = o;
        }
      }
  if (bval == kInf)
    throw SearchSpaceError("no uniform loop order and partition fits every layer");

  BaselineResult r;
  r.outer = tables[0].outer[bo];
  r.inner = tables[0].inner[bi];
  r.partition = partitions[bp];
  for (const auto& lt : tables) {
    detail::Pick pk;
    bool found = false;
    for (std::size_t t = 0; t < lt.tops.size(); ++t) {
      const auto& ev = lt.eval(t, bi);
      if (!ev.feasible || !compatible(ev, r.partition)) continue;
      const double e = lt.tops[t].offchip[bo] + ev.energy;
      if (!found || e < pk.energy) {
        pk = {t, bo, bi, ev.energy_par, e, ev.energy_cycles};
        found = true;
      }
    }
    r.layers.push_back(detail::realize(lt, pk, arch, table));
    r.total_energy_pj += r.layers.back().report.energy.total_pj;
    r.total_cycles += r.layers.back().report.cycles;
  }
  return r;
}

}  // namespace

BaselineResult baseline_fixed(const Network& network, const ArchSpec& arch,
                              const EnergyTable& table, const SearchOptions& options,
                              std::vector<StaticPartition> partitions) {
  return baseline_from_tables(build_tables(network, arch, table, options), arch, table,
                              std::move(partitions));
}

NetworkComparison compare_network(const Network& network, const ArchSpec& arch,
                                  const EnergyTable& table, Objective objective,
                                  const SearchOptions& options,
                                  std::vector<StaticPartition> partitions) {
  const auto tables = build_tables(network, arch, table, options);
  NetworkComparison c;
  for (const auto& lt : tables) {
    detail::Pick p;
    if (!detail::pick(lt, objective, {}, {}, p))
      throw SearchSpaceError("layer " + lt.layer.name + ": every configuration failed allocation");
    auto& n = c.optimized;
    n.layers.push_back(detail::realize(lt, p, arch, table));
    n.total_energy_pj += n.layers.back().report.energy.total_pj;
    n.total_cycles += n.layers.back().report.cycles;
    n.total_maccs += n.layers.back().report.maccs;
  }
  c.baseline = baseline_from_tables(tables, arch, table, std::move(partitions));
  return c;
}

}  // namespace flexacc

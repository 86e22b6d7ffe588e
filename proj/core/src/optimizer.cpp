#include "flexacc/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "flexacc/error.hpp"
#include "flexacc/traffic.hpp"
#include "search_table.hpp"

namespace flexacc {
namespace {

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> d;
  for (std::int64_t i = 1; i <= n; ++i)
    if (n % i == 0) d.push_back(i);
  return d;
}

std::vector<LoopOrder> sorted_or_all(std::vector<LoopOrder> orders) {
  if (orders.empty()) return enumerate_loop_orders();
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  return orders;
}

// Letters of `order` restricted to dims in `mask`; equal keys score identically.
std::string order_key(const LoopOrder& order, const std::array<bool, 5>& mask) {
  std::string key;
  for (auto d : order.dims())
    if (mask[index(d)]) key += dim_letter(d);
  return key;
}

detail::InnerEval evaluate_inner(const LayerShape& layer, const TileExtent& top,
                                 const LoopOrder& inner, const ArchSpec& arch,
                                 const EnergyTable& table, const std::vector<Parallelism>& pars) {
  detail::InnerEval ev;
  std::vector<TileExtent> tiles{top};
  try {
    for (int l = 1; l < static_cast<int>(arch.levels.size()); ++l)
      tiles.push_back(allocate(layer, l, tiles, inner, inner, arch, table));
  } catch (const CapacityError&) {
    return ev;
  }
  ev.feasible = true;
  ev.tiles = tiles;
  for (std::size_t l = 0; l < tiles.size(); ++l) {
    std::array<int, 3> demand{};
    for (auto t : kAllDataTypes)
      demand[index(t)] =
          bank_demand(arch.levels[l], tile_elements(layer, tiles[l], t) * element_bytes(layer, t));
    ev.bank_demand.push_back(demand);
  }

  TrafficEngine engine(layer, tiles);
  TrafficCounts counts;
  counts.boundaries.resize(tiles.size());
  for (int b = 1; b < engine.levels(); ++b) counts.boundaries[b] = engine.boundary(inner, inner, b);
  counts.datapath = engine.datapath(arch.vector_width);
  counts.maccs = macc_count(layer);

  Config probe{inner, inner, TileSpec{tiles}, {}, arch.vector_width};
  const auto rounds = round_classes(layer, probe, arch);
  std::map<std::int64_t, Parallelism> by_cycles;  // smallest parallelism per cycle count
  for (const auto& p : pars)
    by_cycles.try_emplace(cycles_for(rounds, layer, p, arch.vector_width, arch), p);

  auto it = by_cycles.begin();
  ev.min_cycles = it->first;
  ev.perf_par = it->second;
  ev.perf_energy = onchip_energy(counts, layer, arch, table, it->first).onchip_side;
  ev.energy = ev.perf_energy;
  ev.energy_par = ev.perf_par;
  ev.energy_cycles = ev.min_cycles;
  // Static NoC energy grows with cycles, so only exact ties can beat the fastest choice.
  for (++it; it != by_cycles.end(); ++it) {
    double e = onchip_energy(counts, layer, arch, table, it->first).onchip_side;
    if (e != ev.energy) break;
    if (it->second < ev.energy_par) {
      ev.energy_par = it->second;
      ev.energy_cycles = it->first;
    }
  }
  return ev;
}

}  // namespace

Objective parse_objective(std::string_view text) {
  if (text == "energy") return Objective::Energy;
  if (text == "perf") return Objective::Perf;
  if (text == "perf_per_watt") return Objective::PerfPerWatt;
  throw ValidationError("unknown objective '" + std::string(text) +
                        "' (expected energy, perf or perf_per_watt)");
}

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::Energy: return "energy";
    case Objective::Perf: return "perf";
    case Objective::PerfPerWatt: return "perf_per_watt";
  }
  return "?";
}

std::vector<std::int64_t> discretize(std::int64_t extent, int points) {
  auto all = divisors(extent);
  if (points < 2) points = 2;
  if (static_cast<int>(all.size()) <= points) return all;
  std::vector<std::int64_t> out;
  const auto n = all.size() - 1;
  for (int i = 0; i < points; ++i) {
    auto v = all[(static_cast<std::size_t>(i) * n + (points - 1) / 2) / (points - 1)];
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  return out;
}

std::vector<TileExtent> candidate_top_tiles(const LayerShape& layer, const ArchSpec& arch,
                                            const SearchOptions& options) {
  const TileExtent total = layer_extent(layer);
  std::array<std::vector<std::int64_t>, 5> axis;
  for (auto d : kAllDims) axis[index(d)] = discretize(total.get(d), options.tile_points);
  const BufferLevel& top = arch.levels.at(0);
  std::vector<TileExtent> out;
  TileExtent t;
  for (auto w : axis[0])
    for (auto h : axis[1])
      for (auto c : axis[2])
        for (auto k : axis[3])
          for (auto f : axis[4]) {
            t = {w, h, c, k, f};
            int banks = 0;
            for (auto type : kAllDataTypes)
              banks += bank_demand(top, tile_elements(layer, t, type) * element_bytes(layer, type));
            if (banks <= top.banks) out.push_back(t);
          }
  return out;
}

std::vector<Parallelism> candidate_parallelism(const LayerShape& layer, const ArchSpec& arch,
                                               const SearchOptions& options) {
  const auto o = output_shape(layer);
  const std::int64_t pes = arch.total_pes();
  const std::int64_t lane_groups = (o.K + arch.vector_width - 1) / arch.vector_width;
  const auto ds = divisors(pes);
  std::vector<Parallelism> out;
  for (auto hp : ds) {
    if (hp > o.H) break;
    for (auto wp : ds) {
      if (wp > o.W || hp * wp > pes) break;
      for (auto kp : ds) {
        if (kp > lane_groups || hp * wp * kp > pes) break;
        if (!options.search_fp) {
          out.push_back({hp, wp, kp, 1});
          continue;
        }
        for (auto fp : ds) {
          if (fp > o.F || hp * wp * kp * fp > pes) break;
          out.push_back({hp, wp, kp, fp});
        }
      }
    }
  }
  return out;
}

void for_each_config(const LayerShape& layer, const ArchSpec& arch, const SearchOptions& options,
                     const std::function<void(const Config&)>& visit) {
  const auto tops = candidate_top_tiles(layer, arch, options);
  if (tops.empty())
    throw SearchSpaceError("layer " + layer.name + ": no last-level tile fits " +
                           arch.levels.at(0).name);
  const auto pars = candidate_parallelism(layer, arch, options);
  const auto outer = sorted_or_all(options.outer_orders);
  const auto inner = sorted_or_all(options.inner_orders);
  Config c;
  c.vector_width = arch.vector_width;
  for (const auto& o : outer)
    for (const auto& i : inner)
      for (const auto& t : tops)
        for (const auto& p : pars) {
          c.outer = o;
          c.inner = i;
          c.tiles.levels.assign(1, t);
          c.parallelism = p;
          visit(c);
        }
}

std::int64_t count_configs(const LayerShape& layer, const ArchSpec& arch,
                           const SearchOptions& options) {
  return static_cast<std::int64_t>(sorted_or_all(options.outer_orders).size()) *
         static_cast<std::int64_t>(sorted_or_all(options.inner_orders).size()) *
         static_cast<std::int64_t>(candidate_top_tiles(layer, arch, options).size()) *
         static_cast<std::int64_t>(candidate_parallelism(layer, arch, options).size());
}

std::vector<Config> generate_configs(const LayerShape& layer, const ArchSpec& arch,
                                     const SearchOptions& options) {
  std::vector<Config> out;
  for_each_config(layer, arch, options, [&](const Config& c) { out.push_back(c); });
  return out;
}

bool better(Objective objective, const CostReport& a, const Config& ca, const CostReport& b,
            const Config& cb) {
  switch (objective) {
    case Objective::Energy:
      if (a.energy.total_pj != b.energy.total_pj) return a.energy.total_pj < b.energy.total_pj;
      break;
    case Objective::Perf:
      if (a.cycles != b.cycles) return a.cycles < b.cycles;
      if (a.energy.total_pj != b.energy.total_pj) return a.energy.total_pj < b.energy.total_pj;
      break;
    case Objective::PerfPerWatt:
      if (a.perf_per_watt != b.perf_per_watt) return a.perf_per_watt > b.perf_per_watt;
      if (a.energy.total_pj != b.energy.total_pj) return a.energy.total_pj < b.energy.total_pj;
      break;
  }
  return ca < cb;
}

namespace detail {

Config LayerTable::config(std::size_t t, std::size_t o, std::size_t i,
                          const Parallelism& par) const {
  Config c;
  c.outer = outer[o];
  c.inner = inner[i];
  c.tiles.levels = eval(t, i).tiles;
  c.parallelism = par;
  c.vector_width = vector_width;
  return c;
}

LayerTable build_table(const LayerShape& layer, const ArchSpec& arch, const EnergyTable& table,
                       const SearchOptions& options, int threads) {
  layer.validate();
  arch.validate();
  LayerTable lt;
  lt.layer = layer;
  lt.outer = sorted_or_all(options.outer_orders);
  lt.inner = sorted_or_all(options.inner_orders);
  lt.pars = candidate_parallelism(layer, arch, options);
  lt.vector_width = arch.vector_width;
  const auto tops = candidate_top_tiles(layer, arch, options);
  if (tops.empty())
    throw SearchSpaceError("layer " + layer.name + ": no last-level tile fits " +
                           arch.levels.at(0).name);
  lt.tops.resize(tops.size());

  auto fill = [&](std::size_t t) {
    TopEntry& e = lt.tops[t];
    e.top = tops[t];
    const TileExtent one[] = {e.top};
    TrafficEngine engine(layer, one);
    std::array<bool, 5> split_here{}, split_below{};
    for (auto d : kAllDims) {
      split_here[index(d)] = engine.tile_count(d, 0) > 1;
      split_below[index(d)] = d != Dim::C && e.top.get(d) > 1;
    }
    std::map<std::string, double> offchip_memo;
    for (const auto& o : lt.outer) {
      auto [it, fresh] = offchip_memo.try_emplace(order_key(o, split_here), 0.0);
      if (fresh)
        it->second = offchip_energy(engine.boundary(o, o, 0), layer, arch, table).offchip;
      e.offchip.push_back(it->second);
    }
    std::map<std::string, int> inner_memo;
    for (const auto& i : lt.inner) {
      auto [it, fresh] =
          inner_memo.try_emplace(order_key(i, split_below), static_cast<int>(e.evals.size()));
      if (fresh) e.evals.push_back(evaluate_inner(layer, e.top, i, arch, table, lt.pars));
      e.slot.push_back(it->second);
    }
  };

  threads = std::max(1, threads);
  if (threads == 1) {
    for (std::size_t t = 0; t < tops.size(); ++t) fill(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_lock;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t t; (t = next++) < tops.size();) {
          try {
            fill(t);
          } catch (...) {
            std::lock_guard<std::mutex> g(failure_lock);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  const auto per_inner = static_cast<std::int64_t>(lt.outer.size() * lt.pars.size());
  lt.examined = static_cast<std::int64_t>(tops.size() * lt.inner.size()) * per_inner;
  for (const auto& e : lt.tops)
    for (auto s : e.slot)
      if (!e.evals[s].feasible) lt.discarded += per_inner;
  return lt;
}

bool pick(const LayerTable& lt, Objective objective, const std::vector<std::size_t>& outer_in,
          const std::vector<std::size_t>& inner_in, Pick& out) {
  auto all = [](std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
  };
  const auto outer = outer_in.empty() ? all(lt.outer.size()) : outer_in;
  const auto inner = inner_in.empty() ? all(lt.inner.size()) : inner_in;
  const bool perf = objective == Objective::Perf;

  bool found = false;
  for (std::size_t t = 0; t < lt.tops.size(); ++t) {
    const auto& e = lt.tops[t];
    // Best on-chip score over the allowed inner orders.
    bool any = false;
    std::int64_t cyc = 0;
    double b = 0.0;
    for (auto i : inner) {
      const auto& ev = lt.eval(t, i);
      if (!ev.feasible) continue;
      const std::int64_t c = perf ? ev.min_cycles : 0;
      const double be = perf ? ev.perf_energy : ev.energy;
      if (!any || c < cyc || (c == cyc && be < b)) {
        any = true;
        cyc = c;
        b = be;
      }
    }
    if (!any) continue;
    double min_a = e.offchip[outer[0]];
    for (auto o : outer) min_a = std::min(min_a, e.offchip[o]);
    const double m = min_a + b;
    if (found && (cyc > out.cycles || (cyc == out.cycles && m > out.energy))) continue;

    std::size_t o_best = 0;
    for (auto o : outer)
      if (e.offchip[o] + b == m) {
        o_best = o;
        break;
      }
    std::size_t i_best = 0;
    Parallelism par;
    for (auto i : inner) {
      const auto& ev = lt.eval(t, i);
      if (!ev.feasible || (perf && ev.min_cycles != cyc)) continue;
      if (e.offchip[o_best] + (perf ? ev.perf_energy : ev.energy) == m) {
        i_best = i;
        par = perf ? ev.perf_par : ev.energy_par;
        break;
      }
    }
    const auto key = std::make_tuple(cyc, m, o_best, i_best, t);
    const auto held = std::make_tuple(out.cycles, out.energy, out.o, out.i, out.t);
    if (!found || key < held || (key == held && par < out.par)) {
      out = {t, o_best, i_best, par, m, cyc};
      found = true;
    }
  }
  if (found && !perf) out.cycles = lt.eval(out.t, out.i).energy_cycles;
  return found;
}

LayerResult realize(const LayerTable& lt, const Pick& p, const ArchSpec& arch,
                    const EnergyTable& energy) {
  LayerResult r;
  r.layer_name = lt.layer.name;
  r.config = lt.config(p.t, p.o, p.i, p.par);
  r.report = evaluate(lt.layer, r.config, arch, energy);
  r.examined = lt.examined;
  r.discarded = lt.discarded;
  if (r.report.energy.total_pj != p.energy)
    throw std::logic_error("optimizer: re-evaluated energy differs from the search score for " +
                           lt.layer.name);
  return r;
}

}  // namespace detail

LayerResult optimize_layer(const LayerShape& layer, const ArchSpec& arch, const EnergyTable& table,
                           Objective objective, const SearchOptions& options) {
  const auto lt = detail::build_table(layer, arch, table, options, options.threads);
  detail::Pick p;
  if (!detail::pick(lt, objective, {}, {}, p))
    throw SearchSpaceError("layer " + layer.name + ": every configuration failed allocation");
  return detail::realize(lt, p, arch, table);
}

NetworkResult optimize_network(const Network& network, const ArchSpec& arch,
                               const EnergyTable& table, Objective objective,
                               const SearchOptions& options) {
  if (network.layers.empty()) throw ValidationError("network has no layers");
  NetworkResult n;
  for (const auto& layer : network.layers) {
    n.layers.push_back(optimize_layer(layer, arch, table, objective, options));
    n.total_energy_pj += n.layers.back().report.energy.total_pj;
    n.total_cycles += n.layers.back().report.cycles;
    n.total_maccs += n.layers.back().report.maccs;
  }
  return n;
}

}  // namespace flexacc

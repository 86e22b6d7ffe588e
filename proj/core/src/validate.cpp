#include "flexacc/validate.hpp"

#include <algorithm>

#include "flexacc/conv_reference.hpp"
#include "flexacc/error.hpp"
#include "flexacc/funcsim.hpp"

namespace flexacc {
namespace {

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

}  // namespace

Config random_config(const LayerShape& layer, const ArchSpec& arch, std::mt19937_64& rng) {
  static const auto orders = enumerate_loop_orders();
  Config c;
  c.outer = orders[uniform(rng, 0, 119)];
  c.inner = orders[uniform(rng, 0, 119)];
  c.vector_width = arch.vector_width;

  TileExtent parent = layer_extent(layer);
  for (std::size_t l = 0; l < arch.levels.size(); ++l) {
    TileExtent t;
    for (auto d : kAllDims) t.set(d, uniform(rng, 1, parent.get(d)));
    c.tiles.levels.push_back(t);
    parent = t;
  }
  // Halve the largest extent of the deepest overflowing level until it fits.
  for (int guard = 0; !fits(layer, c.tiles, arch); ++guard) {
    if (guard > 10'000) throw CapacityError("no random tile chain fits " + arch.name);
    const auto bytes = tile_bytes_per_level(layer, c.tiles);
    std::size_t worst = 0;
    for (std::size_t l = 0; l < bytes.size(); ++l) {
      const auto& lev = arch.levels[l];
      int banks = 0;
      for (auto b : bytes[l]) banks += bank_demand(lev, b);
      if (banks > lev.banks) worst = l;
    }
    TileExtent& t = c.tiles.levels[worst];
    Dim big = Dim::W;
    for (auto d : kAllDims)
      if (t.get(d) > t.get(big)) big = d;
    if (t.get(big) == 1) throw CapacityError("unit tiles do not fit " + arch.name);
    t.set(big, (t.get(big) + 1) / 2);
    for (std::size_t l = worst + 1; l < c.tiles.levels.size(); ++l)
      for (auto d : kAllDims)
        c.tiles.levels[l].set(d, std::min(c.tiles.levels[l].get(d), c.tiles.levels[l - 1].get(d)));
  }

  const auto o = output_shape(layer);
  const std::int64_t pes = arch.total_pes();
  const std::int64_t groups = (o.K + arch.vector_width - 1) / arch.vector_width;
  auto& p = c.parallelism;
  p.hp = uniform(rng, 1, std::min(o.H, pes));
  p.wp = uniform(rng, 1, std::min(o.W, pes / p.hp));
  p.kp = uniform(rng, 1, std::min(groups, pes / (p.hp * p.wp)));
  p.fp = 1;
  return c;
}

FsmProgram random_fsm_program(std::mt19937_64& rng, int max_depth, std::int64_t max_bound) {
  FsmProgram p;
  const int depth = static_cast<int>(uniform(rng, 1, max_depth));
  for (int j = 0; j < depth; ++j) {
    p.bounds.push_back(uniform(rng, 1, max_bound));
    p.steps.push_back(uniform(rng, -50, 50));
  }
  p.event_mask = static_cast<std::uint32_t>(uniform(rng, 0, (1 << depth) - 1));
  return p;
}

std::vector<FsmOutput> fsm_reference(const FsmProgram& program) {
  program.validate();
  const int depth = program.depth();
  std::int64_t states = 1;
  for (auto b : program.bounds) states *= b;
  std::vector<FsmOutput> out;
  std::vector<std::int64_t> idx(depth, 0);
  for (std::int64_t s = 0; s < states; ++s) {
    // Decode the state index into loop counters, innermost fastest.
    std::int64_t rest = s;
    for (int j = depth - 1; j >= 0; --j) {
      idx[j] = rest % program.bounds[j];
      rest /= program.bounds[j];
    }
    // Loop j has advanced (prefix index through j) - (prefix index through j-1) times.
    FsmOutput o;
    std::int64_t prefix = 0, prev = 0;
    bool inner_done = true;
    for (int j = 0; j < depth; ++j) {
      prefix = prefix * program.bounds[j] + idx[j];
      o.address += program.steps[j] * (prefix - prev);
      prev = prefix;
    }
    for (int j = depth - 1; j >= 0; --j) {
      inner_done = inner_done && idx[j] == program.bounds[j] - 1;
      if (inner_done && (program.event_mask >> j & 1u)) o.events |= 1u << j;
    }
    out.push_back(o);
  }
  return out;
}

std::vector<ValidationCheck> run_validation(const Network& network, const ArchSpec& arch,
                                            const ValidationOptions& options) {
  arch.validate();
  if (network.layers.empty()) throw ValidationError("network has no layers");
  for (const auto& l : network.layers) {
    l.validate();
    if (macc_count(l) > options.max_maccs)
      throw ValidationError("layer " + l.name + " has " + std::to_string(macc_count(l)) +
                            " MACCs; validate is limited to " + std::to_string(options.max_maccs));
  }
  std::vector<ValidationCheck> checks(3);
  checks[0].name = "funcsim_vs_reference";
  checks[1].name = "traffic_vs_trace";
  checks[2].name = "fsm_vs_loops";
  auto record = [](ValidationCheck& c, bool ok, const std::string& what) {
    if (ok) {
      ++c.passed;
    } else {
      if (c.failed == 0) c.first_failure = what;
      ++c.failed;
    }
  };

  std::mt19937_64 rng(options.seed);
  for (std::int64_t trial = 0; trial < options.trials; ++trial) {
    const auto& layer = network.layers[static_cast<std::size_t>(trial) % network.layers.size()];
    const Config config = random_config(layer, arch, rng);
    const auto data_seed = rng();
    const Tensor input = random_tensor(input_dims(layer), data_seed);
    const Tensor filters = random_tensor(filter_dims(layer), data_seed ^ 0x9e3779b97f4a7c15ull);
    const auto sim = simulate(layer, config, arch, input, filters);
    const std::string where = layer.name + " " + config.to_string();

    record(checks[0], sim.output == conv3d_reference(input, filters, layer), where);
    TrafficCounts model = traffic_model(layer, config, options.traffic);
    record(checks[1], model == count_accesses(sim.trace), where);

    const auto program = random_fsm_program(rng);
    record(checks[2], fsm_run(program) == fsm_reference(program),
           "fsm program of depth " + std::to_string(program.depth()));
  }
  return checks;
}

}  // namespace flexacc

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "flexacc/error.hpp"
#include "flexacc/hierarchy.hpp"
#include "flexacc/io.hpp"
#include "flexacc/optimizer.hpp"
#include "flexacc/report.hpp"
#include "flexacc/validate.hpp"

namespace fs = std::filesystem;
using namespace flexacc;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kInputError = 2;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string(), 0, "cannot write file");
  out << text;
  if (!out) throw ParseError(path.string(), 0, "write failed");
}

// Writes to `out` when given, otherwise to stdout.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

Network select_layers(const Network& net, const std::vector<std::string>& names) {
  if (names.empty()) return net;
  Network sub{net.name, {}};
  std::set<std::string> wanted(names.begin(), names.end());
  for (const auto& l : net.layers)
    if (wanted.erase(l.name)) sub.layers.push_back(l);
  if (!wanted.empty()) throw ValidationError("unknown layer '" + *wanted.begin() + "'");
  if (sub.layers.empty()) throw ValidationError("layer selection is empty");
  return sub;
}

struct OptimizeArgs {
  std::string network, arch, energy, objective = "energy", out, schedule;
  int threads = 1;
  int tile_points = 8;
  bool no_baseline = false;
};

int run_optimize(const OptimizeArgs& a) {
  const auto net = load_network(a.network);
  const auto arch = load_arch(a.arch);
  const auto table = load_energy(a.energy);
  const Objective objective = parse_objective(a.objective);
  SearchOptions options;
  options.threads = a.threads;
  options.tile_points = a.tile_points;

  NetworkResult result;
  BaselineResult baseline;
  bool have_baseline = false;
  if (!a.schedule.empty()) {
    // Recall: score the saved configs without searching.
    const auto saved = load_schedule(a.schedule);
    for (const auto& layer : net.layers) {
      auto it = std::find_if(saved.begin(), saved.end(),
                             [&](const ScheduleEntry& e) { return e.layer == layer.name; });
      if (it == saved.end())
        throw ValidationError(a.schedule + ": no saved config for layer " + layer.name);
      validate_tiles(layer, it->config.tiles);
      check_capacity(layer, it->config.tiles, arch);
      LayerResult r;
      r.layer_name = layer.name;
      r.config = it->config;
      r.report = evaluate(layer, it->config, arch, table);
      result.layers.push_back(r);
      result.total_energy_pj += r.report.energy.total_pj;
      result.total_cycles += r.report.cycles;
      result.total_maccs += r.report.maccs;
    }
  } else if (a.no_baseline) {
    result = optimize_network(net, arch, table, objective, options);
  } else {
    auto cmp = compare_network(net, arch, table, objective, options);
    result = std::move(cmp.optimized);
    baseline = std::move(cmp.baseline);
    have_baseline = true;
  }

  const BaselineResult* base = have_baseline ? &baseline : nullptr;
  const std::string csv = format_report_csv(net.name, objective, result, base);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    fs::create_directories(a.out);
    write_file(fs::path(a.out) / "report.csv", csv);
    write_file(fs::path(a.out) / "report.json", format_report_json(net.name, objective, result, base));
    std::vector<ScheduleEntry> entries;
    for (const auto& r : result.layers) entries.push_back({r.layer_name, r.config});
    write_file(fs::path(a.out) / "schedule.json", format_schedule(net.name, entries));
  }
  std::cerr << net.name << ": " << result.layers.size() << " layers, energy "
            << format_double(result.total_energy_pj) << " pJ, " << result.total_cycles
            << " cycles";
  if (base)
    std::cerr << "; baseline " << format_double(base->total_energy_pj) << " pJ (ratio "
              << format_double(base->total_energy_pj / result.total_energy_pj) << ")";
  std::cerr << "\n";
  return kOk;
}

struct ValidateArgs {
  std::string network, arch, mutate;
  std::uint64_t seed = 1;
  std::int64_t trials = 200;
  std::int64_t max_maccs = 10'000'000;
};

int run_validate(const ValidateArgs& a) {
  const auto net = load_network(a.network);
  const auto arch = load_arch(a.arch);
  ValidationOptions options;
  options.seed = a.seed;
  options.trials = a.trials;
  options.max_maccs = a.max_maccs;
  if (a.mutate == "halo") options.traffic.halo_bias = 1;
  if (a.trials == 0) std::cerr << "warning: --trials 0 checks nothing\n";

  const auto checks = run_validation(net, arch, options);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << c.name << ": " << c.passed << " passed, " << c.failed << " failed\n";
    if (c.failed) {
      ok = false;
      std::cout << "  first failure: " << c.first_failure << "\n";
    }
  }
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kOk : kValidationFailed;
}

struct SweepArgs {
  std::string network, arch, energy, vary, out;
  std::vector<std::string> layers;
  int threads = 1;
  int tile_points = 8;
  int max_depth = 4;
};

int run_sweep(const SweepArgs& a) {
  const auto net = select_layers(load_network(a.network), a.layers);
  const auto arch = load_arch(a.arch);
  const auto table = load_energy(a.energy);
  SearchOptions options;
  options.threads = a.threads;
  options.tile_points = a.tile_points;
  std::ostringstream csv;
  csv << "# flexacc sweep v" << kReportSchemaVersion << "\n";

  if (a.vary == "outer" || a.vary == "inner") {
    const auto rows = sweep_orders(net, arch, table, a.vary == "outer", options);
    csv << "layer,vary,order,energy_pj,dram_pj,relative_to_opt\n";
    for (const auto& r : rows) {
      const auto opt = std::find_if(rows.begin(), rows.end(), [&](const OrderSweepRow& x) {
        return x.layer == r.layer && x.order == "Opt";
      });
      csv << r.layer << ',' << a.vary << ',' << r.order << ',' << format_double(r.energy_pj)
          << ',' << format_double(r.dram_pj) << ','
          << format_double(r.energy_pj / opt->energy_pj) << '\n';
    }
  } else if (a.vary == "tiles") {
    csv << "layer,input_share,filter_share,psum_share,input_bytes,filter_bytes,psum_bytes\n";
    for (const auto& r : sweep_allocation(net, arch, table, options))
      csv << r.layer << ',' << format_double(r.l2_share[0]) << ',' << format_double(r.l2_share[1])
          << ',' << format_double(r.l2_share[2]) << ',' << r.l2_bytes[0] << ',' << r.l2_bytes[1]
          << ',' << r.l2_bytes[2] << '\n';
  } else if (a.vary == "hierarchy-depth") {
    DepthSweepOptions dopt;
    dopt.max_depth = a.max_depth;
    dopt.tile_points = std::min(a.tile_points, 6);
    csv << "layer,depth,energy_pj,buffer_pj,energy_gain_vs_1,buffer_gain_vs_1,config,buffer_bytes\n";
    for (const auto& layer : net.layers) {
      const auto rows = sweep_hierarchy_depth(layer, arch, table, dopt);
      for (const auto& r : rows) {
        std::string bytes;
        for (auto b : r.buffer_bytes) bytes += (bytes.empty() ? "" : ";") + std::to_string(b);
        csv << layer.name << ',' << r.depth << ',' << format_double(r.energy_pj) << ','
            << format_double(r.buffer_pj) << ','
            << format_double(rows.front().energy_pj / r.energy_pj) << ','
            << format_double(rows.front().buffer_pj / r.buffer_pj) << ',' << r.config.to_string()
            << ',' << bytes << '\n';
      }
    }
  } else {
    throw ValidationError("unknown sweep axis '" + a.vary +
                          "' (expected outer, inner, tiles or hierarchy-depth)");
  }
  emit(a.out, csv.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design-space exploration and functional simulation for flexible 3D-CNN accelerators"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Search per-layer schedules and report costs");
  optimize->add_option("network", opt.network, "Network file")->required();
  optimize->add_option("arch", opt.arch, "Architecture file")->required();
  optimize->add_option("energy", opt.energy, "Energy table file")->required();
  optimize->add_option("--objective", opt.objective, "energy, perf or perf_per_watt")
      ->check(CLI::IsMember({"energy", "perf", "perf_per_watt"}));
  optimize->add_option("--out", opt.out,
                       "Directory for report.csv, report.json and schedule.json "
                       "(CSV goes to stdout when omitted)");
  optimize->add_option("--threads", opt.threads, "Worker threads")->check(CLI::Range(1, 256));
  optimize->add_option("--tile-points", opt.tile_points, "Tile sizes kept per dimension")
      ->check(CLI::Range(2, 64));
  optimize->add_option("--schedule", opt.schedule, "Score a saved schedule instead of searching");
  optimize->add_flag("--no-baseline", opt.no_baseline, "Skip the uniform baseline search");

  ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "Cross-check simulator, model and references");
  validate->add_option("network", val.network, "Network file (desk-scale layers)")->required();
  validate->add_option("arch", val.arch, "Architecture file")->required();
  validate->add_option("--seed", val.seed, "Random seed");
  validate->add_option("--trials", val.trials, "Random trials")->check(CLI::NonNegativeNumber);
  validate->add_option("--max-maccs", val.max_maccs, "Refuse layers above this MACC count");
  validate->add_option("--mutate", val.mutate, "Inject a known model error")
      ->check(CLI::IsMember({"halo"}));

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Per-axis sweeps for motivation-style studies");
  sweep->add_option("network", sw.network, "Network file")->required();
  sweep->add_option("arch", sw.arch, "Architecture file")->required();
  sweep->add_option("energy", sw.energy, "Energy table file")->required();
  sweep->add_option("--vary", sw.vary, "outer, inner, tiles or hierarchy-depth")->required();
  sweep->add_option("--layers", sw.layers, "Layers to include (default: all)")->delimiter(',');
  sweep->add_option("--out", sw.out, "CSV path (stdout when omitted)");
  sweep->add_option("--threads", sw.threads, "Worker threads")->check(CLI::Range(1, 256));
  sweep->add_option("--tile-points", sw.tile_points, "Tile sizes kept per dimension")
      ->check(CLI::Range(2, 64));
  sweep->add_option("--max-depth", sw.max_depth, "Deepest hierarchy for hierarchy-depth")
      ->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (optimize->parsed()) return run_optimize(opt);
    if (validate->parsed()) return run_validate(val);
    return run_sweep(sw);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kValidationFailed;
  }
}

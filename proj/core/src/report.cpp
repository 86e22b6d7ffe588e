#include "flexacc/report.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>

namespace flexacc {
namespace {

const char* kColumns =
    "network,layer,objective,config_hash,outer,inner,tiles,parallelism,energy_pj,dram_pj,"
    "level_pj,noc_pj,compute_pj,cycles,utilization,perf_per_watt,maccs,examined,discarded";

std::string tiles_text(const Config& c) {
  std::string s;
  for (const auto& t : c.tiles.levels) {
    if (!s.empty()) s += '/';
    s += std::to_string(t.w) + 'x' + std::to_string(t.h) + 'x' + std::to_string(t.c) + 'x' +
         std::to_string(t.k) + 'x' + std::to_string(t.f);
  }
  return s;
}

std::string par_text(const Parallelism& p) {
  return std::to_string(p.hp) + 'x' + std::to_string(p.wp) + 'x' + std::to_string(p.kp) + 'x' +
         std::to_string(p.fp);
}

std::string levels_text(const std::vector<double>& levels) {
  std::string s;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) s += ';';
    s += format_double(levels[i]);
  }
  return s;
}

std::string csv_row(const std::string& network, const std::string& label, Objective objective,
                    const LayerResult& r) {
  const auto& e = r.report.energy;
  return network + ',' + label + ',' + std::string(to_string(objective)) + ',' +
         config_hash(r.config) + ',' + r.config.outer.to_string() + ',' +
         r.config.inner.to_string(true) + ',' + tiles_text(r.config) + ',' +
         par_text(r.config.parallelism) + ',' + format_double(e.total_pj) + ',' +
         format_double(e.dram) + ',' + levels_text(e.levels) + ',' + format_double(e.noc) + ',' +
         format_double(e.compute) + ',' + std::to_string(r.report.cycles) + ',' +
         format_double(r.report.utilization) + ',' + format_double(r.report.perf_per_watt) + ',' +
         std::to_string(r.report.maccs) + ',' + std::to_string(r.examined) + ',' +
         std::to_string(r.discarded) + '\n';
}

struct Totals {
  double energy = 0, dram = 0, noc = 0, compute = 0;
  std::vector<double> levels;
  std::int64_t cycles = 0, maccs = 0, examined = 0, discarded = 0;
};

Totals totals(const std::vector<LayerResult>& layers) {
  Totals t;
  for (const auto& r : layers) {
    const auto& e = r.report.energy;
    t.energy += e.total_pj;
    t.dram += e.dram;
    t.noc += e.noc;
    t.compute += e.compute;
    t.levels.resize(std::max(t.levels.size(), e.levels.size()), 0.0);
    for (std::size_t l = 0; l < e.levels.size(); ++l) t.levels[l] += e.levels[l];
    t.cycles += r.report.cycles;
    t.maccs += r.report.maccs;
    t.examined += r.examined;
    t.discarded += r.discarded;
  }
  return t;
}

double ppw(const Totals& t) { return t.energy > 0 ? t.maccs / (t.energy * 1e-12) : 0.0; }

std::string total_row(const std::string& network, const std::string& label, Objective objective,
                      const Totals& t, const std::string& outer, const std::string& inner) {
  return network + ',' + label + ',' + std::string(to_string(objective)) + ",," + outer + ',' +
         inner + ",,," + format_double(t.energy) + ',' + format_double(t.dram) + ',' +
         levels_text(t.levels) + ',' + format_double(t.noc) + ',' + format_double(t.compute) +
         ',' + std::to_string(t.cycles) + ",," + format_double(ppw(t)) + ',' +
         std::to_string(t.maccs) + ',' + std::to_string(t.examined) + ',' +
         std::to_string(t.discarded) + '\n';
}

nlohmann::ordered_json layer_json(const LayerResult& r) {
  const auto& e = r.report.energy;
  nlohmann::ordered_json j;
  j["layer"] = r.layer_name;
  j["config_hash"] = config_hash(r.config);
  j["config"] = r.config.to_string();
  j["energy_pj"] = {{"total", e.total_pj}, {"dram", e.dram},  {"levels", e.levels},
                    {"noc", e.noc},        {"compute", e.compute}};
  j["cycles"] = r.report.cycles;
  j["utilization"] = r.report.utilization;
  j["perf_per_watt"] = r.report.perf_per_watt;
  j["maccs"] = r.report.maccs;
  j["examined"] = r.examined;
  j["discarded"] = r.discarded;
  return j;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string format_report_csv(const std::string& network, Objective objective,
                              const NetworkResult& result, const BaselineResult* baseline) {
  std::string s = "# flexacc report v" + std::to_string(kReportSchemaVersion) + "\n";
  s += kColumns;
  s += '\n';
  for (const auto& r : result.layers) s += csv_row(network, r.layer_name, objective, r);
  s += total_row(network, "TOTAL", objective, totals(result.layers), "", "");
  if (baseline)
    s += total_row(network, "BASELINE", objective, totals(baseline->layers),
                   baseline->outer.to_string(), baseline->inner.to_string(true));
  return s;
}

std::string format_report_json(const std::string& network, Objective objective,
                               const NetworkResult& result, const BaselineResult* baseline) {
  const Totals opt = totals(result.layers);
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["network"] = network;
  j["objective"] = to_string(objective);
  j["layers"] = nlohmann::ordered_json::array();
  for (const auto& r : result.layers) j["layers"].push_back(layer_json(r));
  nlohmann::ordered_json summary = {
      {"energy_pj", opt.energy}, {"cycles", opt.cycles}, {"perf_per_watt", ppw(opt)}};
  if (baseline) {
    const Totals base = totals(baseline->layers);
    nlohmann::ordered_json b;
    b["outer"] = baseline->outer.to_string();
    b["inner"] = baseline->inner.to_string(true);
    b["partition"] = baseline->partition.label;
    b["layers"] = nlohmann::ordered_json::array();
    for (const auto& r : baseline->layers) b["layers"].push_back(layer_json(r));
    j["baseline"] = b;
    summary["baseline_energy_pj"] = base.energy;
    summary["energy_ratio"] = opt.energy > 0 ? base.energy / opt.energy : 0.0;
    summary["baseline_cycles"] = base.cycles;
    summary["baseline_perf_per_watt"] = ppw(base);
    summary["perf_per_watt_ratio"] = ppw(base) > 0 ? ppw(opt) / ppw(base) : 0.0;
  }
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

}  // namespace flexacc

#include "flexacc/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "flexacc/error.hpp"

namespace flexacc {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_of(const YAML::Node& node) { return node.Mark().is_null() ? 0 : node.Mark().line + 1; }

YAML::Node load_root(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(source, e.mark.line + 1, e.msg);
  }
  if (!root.IsMap()) throw ParseError(source, line_of(root), "expected a mapping at top level");
  return root;
}

void expect_keys(const YAML::Node& map, const std::string& source,
                 const std::set<std::string>& allowed) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ParseError(source, line_of(kv.first), "unknown key '" + key + "'");
  }
}

template <typename T>
T as(const YAML::Node& node, const std::string& source, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    const char* kind = std::is_same_v<T, std::string> ? "a string"
                       : std::is_same_v<T, bool>      ? "true/false"
                       : std::is_integral_v<T>        ? "an integer"
                                                      : "a number";
    throw ParseError(source, line_of(node), "field '" + field + "': expected " + kind);
  }
}

template <typename T>
T required(const YAML::Node& map, const std::string& key, const std::string& source) {
  const YAML::Node n = map[key];
  if (!n) throw ParseError(source, line_of(map), "missing required key '" + key + "'");
  return as<T>(n, source, key);
}

template <typename T>
T optional(const YAML::Node& map, const std::string& key, const std::string& source, T fallback) {
  const YAML::Node n = map[key];
  return n ? as<T>(n, source, key) : fallback;
}

YAML::Node required_seq(const YAML::Node& map, const std::string& key, const std::string& source) {
  const YAML::Node n = map[key];
  if (!n) throw ParseError(source, line_of(map), "missing required key '" + key + "'");
  if (!n.IsSequence() || n.size() == 0)
    throw ParseError(source, line_of(n), "'" + key + "' must be a non-empty list");
  return n;
}

// Rethrows a ValidationError with the file (and line, when known) prefixed.
template <typename F>
void validated(const std::string& source, int line, F&& check) {
  try {
    check();
  } catch (const ValidationError& e) {
    throw ValidationError(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " + e.what());
  }
}

}  // namespace

Network parse_network(const std::string& text, const std::string& source) {
  const YAML::Node root = load_root(text, source);
  expect_keys(root, source, {"name", "precision_bits", "layers"});
  Network net;
  net.name = optional<std::string>(root, "name", source, "network");
  const int precision = optional<int>(root, "precision_bits", source, 8);
  static const char* kFields[] = {"name", "W",        "H",        "C",        "F",
                                  "K",    "R",        "S",        "T",        "stride_w",
                                  "stride_h", "stride_f", "precision_bits"};
  std::set<std::string> names;
  for (const auto& row : required_seq(root, "layers", source)) {
    const int line = line_of(row);
    if (!row.IsSequence() || (row.size() != 9 && row.size() != 12 && row.size() != 13))
      throw ParseError(source, line,
                       "layer needs 9, 12 or 13 values: [name, W, H, C, F, K, R, S, T"
                       "(, stride_w, stride_h, stride_f(, precision_bits))]");
    LayerShape l;
    l.name = as<std::string>(row[0], source, kFields[0]);
    std::int64_t v[12];
    for (std::size_t i = 1; i < row.size(); ++i)
      v[i - 1] = as<std::int64_t>(row[i], source, kFields[i]);
    l.W = v[0]; l.H = v[1]; l.C = v[2]; l.F = v[3]; l.K = v[4];
    l.R = v[5]; l.S = v[6]; l.T = v[7];
    if (row.size() >= 12) {
      l.stride_w = v[8]; l.stride_h = v[9]; l.stride_f = v[10];
    }
    l.precision_bits = row.size() == 13 ? static_cast<int>(v[11]) : precision;
    if (!names.insert(l.name).second)
      throw ParseError(source, line, "duplicate layer '" + l.name + "'");
    validated(source, line, [&] { l.validate(); });
    net.layers.push_back(l);
  }
  return net;
}

ArchSpec parse_arch(const std::string& text, const std::string& source) {
  const YAML::Node root = load_root(text, source);
  expect_keys(root, source,
              {"name", "clusters", "pes_per_cluster", "vector_width", "clock_hz", "bus_bits",
               "levels"});
  ArchSpec a;
  a.name = optional<std::string>(root, "name", source, "arch");
  a.clusters = required<int>(root, "clusters", source);
  a.pes_per_cluster = required<int>(root, "pes_per_cluster", source);
  a.vector_width = optional<int>(root, "vector_width", source, 1);
  a.clock_hz = optional<double>(root, "clock_hz", source, 1e9);
  for (const auto& n : required_seq(root, "levels", source)) {
    if (!n.IsMap()) throw ParseError(source, line_of(n), "each level must be a mapping");
    expect_keys(n, source, {"name", "bytes", "banks", "word_bits", "double_buffered"});
    BufferLevel l;
    l.name = required<std::string>(n, "name", source);
    l.bytes = required<std::int64_t>(n, "bytes", source);
    l.banks = required<int>(n, "banks", source);
    l.word_bits = required<int>(n, "word_bits", source);
    l.double_buffered = optional<bool>(n, "double_buffered", source, true);
    a.levels.push_back(l);
  }
  if (const YAML::Node bus = root["bus_bits"]) {
    if (!bus.IsSequence()) throw ParseError(source, line_of(bus), "'bus_bits' must be a list");
    for (const auto& w : bus) a.bus_bits.push_back(as<int>(w, source, "bus_bits"));
  }
  validated(source, 0, [&] { a.validate(); });
  return a;
}

EnergyTable parse_energy(const std::string& text, const std::string& source) {
  const YAML::Node root = load_root(text, source);
  expect_keys(root, source,
              {"name", "dram_pj_per_bit", "macc_pj", "noc_pj_per_byte",
               "noc_pj_per_cycle_per_link", "sram"});
  EnergyTable t;
  t.name = optional<std::string>(root, "name", source, "energy");
  t.dram_pj_per_bit = optional<double>(root, "dram_pj_per_bit", source, t.dram_pj_per_bit);
  t.macc_pj = optional<double>(root, "macc_pj", source, 0.0);
  t.noc_pj_per_byte = optional<double>(root, "noc_pj_per_byte", source, 0.0);
  t.noc_pj_per_cycle_per_link = optional<double>(root, "noc_pj_per_cycle_per_link", source, 0.0);
  for (const auto& row : required_seq(root, "sram", source)) {
    if (!row.IsSequence() || row.size() != 2)
      throw ParseError(source, line_of(row), "sram entry needs [bank_bytes, pj_per_bit]");
    t.sram.push_back({as<std::int64_t>(row[0], source, "bank_bytes"),
                      as<double>(row[1], source, "pj_per_bit")});
  }
  validated(source, 0, [&] { t.validate(); });
  return t;
}

Network load_network(const std::filesystem::path& path) {
  return parse_network(read_file(path), path.string());
}
ArchSpec load_arch(const std::filesystem::path& path) {
  return parse_arch(read_file(path), path.string());
}
EnergyTable load_energy(const std::filesystem::path& path) {
  return parse_energy(read_file(path), path.string());
}

std::string format_energy(const EnergyTable& table) {
  YAML::Emitter out;
  out.SetDoublePrecision(12);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << table.name;
  out << YAML::Key << "dram_pj_per_bit" << YAML::Value << table.dram_pj_per_bit;
  out << YAML::Key << "macc_pj" << YAML::Value << table.macc_pj;
  out << YAML::Key << "noc_pj_per_byte" << YAML::Value << table.noc_pj_per_byte;
  out << YAML::Key << "noc_pj_per_cycle_per_link" << YAML::Value
      << table.noc_pj_per_cycle_per_link;
  out << YAML::Key << "sram" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : table.sram)
    out << YAML::Flow << YAML::BeginSeq << e.bank_bytes << e.pj_per_bit << YAML::EndSeq;
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

// --- schedules ---------------------------------------------------------------

namespace {

constexpr const char* kScheduleFormat = "flexacc-schedule";
constexpr int kScheduleVersion = 1;

nlohmann::ordered_json config_json(const Config& c) {
  nlohmann::ordered_json j;
  j["outer"] = c.outer.to_string();
  j["inner"] = c.inner.to_string(true);
  j["tiles"] = nlohmann::ordered_json::array();
  for (const auto& t : c.tiles.levels) j["tiles"].push_back({t.w, t.h, t.c, t.k, t.f});
  const auto& p = c.parallelism;
  j["parallelism"] = {p.hp, p.wp, p.kp, p.fp};
  j["vector_width"] = c.vector_width;
  return j;
}

Config config_from_json(const nlohmann::json& j) {
  Config c;
  c.outer = LoopOrder::parse(j.at("outer").get<std::string>());
  c.inner = LoopOrder::parse(j.at("inner").get<std::string>());
  for (const auto& t : j.at("tiles")) {
    const auto v = t.get<std::vector<std::int64_t>>();
    if (v.size() != 5) throw ValidationError("a tile needs 5 extents [W, H, C, K, F]");
    c.tiles.levels.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  const auto p = j.at("parallelism").get<std::vector<std::int64_t>>();
  if (p.size() != 4) throw ValidationError("parallelism needs 4 factors [H, W, K, F]");
  c.parallelism = {p[0], p[1], p[2], p[3]};
  c.vector_width = j.at("vector_width").get<int>();
  return c;
}

}  // namespace

std::string format_schedule(const std::string& network, const std::vector<ScheduleEntry>& entries) {
  nlohmann::ordered_json j;
  j["format"] = kScheduleFormat;
  j["version"] = kScheduleVersion;
  j["network"] = network;
  j["layers"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json row;
    row["layer"] = e.layer;
    row["config"] = config_json(e.config);
    j["layers"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::vector<ScheduleEntry> parse_schedule(const std::string& text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, 0, e.what());
  }
  std::vector<ScheduleEntry> out;
  try {
    if (j.at("format") != kScheduleFormat || j.at("version") != kScheduleVersion)
      throw ParseError(source, 0, "not a version 1 schedule file");
    for (const auto& row : j.at("layers"))
      out.push_back({row.at("layer").get<std::string>(), config_from_json(row.at("config"))});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 0, e.what());
  } catch (const ValidationError& e) {
    throw ParseError(source, 0, e.what());
  }
  return out;
}

std::vector<ScheduleEntry> load_schedule(const std::filesystem::path& path) {
  return parse_schedule(read_file(path), path.string());
}

}  // namespace flexacc

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "flexacc/arch.hpp"
#include "flexacc/config.hpp"
#include "flexacc/energy.hpp"
#include "flexacc/layer.hpp"

namespace flexacc {

/// Loaders for the YAML `*.net`, `*.arch` and `*.energy` files described in
/// the README. All throw ParseError (with line) or ValidationError (with
/// field) and return fully validated objects.
Network load_network(const std::filesystem::path& path);
ArchSpec load_arch(const std::filesystem::path& path);
EnergyTable load_energy(const std::filesystem::path& path);

Network parse_network(const std::string& text, const std::string& source = "<string>");
ArchSpec parse_arch(const std::string& text, const std::string& source = "<string>");
EnergyTable parse_energy(const std::string& text, const std::string& source = "<string>");

std::string format_energy(const EnergyTable& table);

/// Saved per-layer schedules (JSON): recalled instead of re-running the search.
struct ScheduleEntry {
  std::string layer;
  Config config;
};

std::string format_schedule(const std::string& network, const std::vector<ScheduleEntry>& entries);
std::vector<ScheduleEntry> parse_schedule(const std::string& text,
                                          const std::string& source = "<string>");
std::vector<ScheduleEntry> load_schedule(const std::filesystem::path& path);

}  // namespace flexacc

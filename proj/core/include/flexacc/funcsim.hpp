#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flexacc/arch.hpp"
#include "flexacc/config.hpp"
#include "flexacc/layer.hpp"
#include "flexacc/tensor.hpp"
#include "flexacc/traffic.hpp"

namespace flexacc {

/// One logged transfer, emitted only when tracing is enabled.
struct TraceRecord {
  int boundary = 0;
  DataType type = DataType::Input;
  enum class Kind : std::uint8_t { Fill, Writeback } kind = Kind::Fill;
  std::int64_t elements = 0;
  std::int64_t bytes = 0;
};

struct EventTrace {
  std::vector<BoundaryTraffic> boundaries;
  DatapathCounts datapath;
  std::vector<std::int64_t> pe_maccs;  ///< indexed by PE, cluster-major
  std::int64_t maccs = 0;
  std::int64_t conflict_stalls = 0;
  std::vector<TraceRecord> records;
};

struct SimOptions {
  bool record_events = false;
};

struct SimResult {
  Tensor output;
  EventTrace trace;
};

/// Executes the whole tiled schedule on real data, moving tiles between
/// per-level buffers and counting every transfer as it happens.
/// Throws CapacityError if the tiles overflow `arch`, DimensionError on
/// tensor/layer mismatch and ValidationError on a malformed config.
SimResult simulate(const LayerShape& layer, const Config& config, const ArchSpec& arch,
                   const Tensor& input, const Tensor& filters, const SimOptions& options = {});

/// Projects a trace onto the analytical count structure.
TrafficCounts count_accesses(const EventTrace& trace);

/// Line-delimited JSON, one record per line.
std::string dump_trace(const EventTrace& trace, const ArchSpec& arch);

}  // namespace flexacc

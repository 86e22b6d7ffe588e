#pragma once

#include <cstdint>
#include <string>

#include "flexacc/loop_order.hpp"
#include "flexacc/tiling.hpp"

namespace flexacc {

/// PEs working in parallel along each dimension. `kp` counts PEs along K;
/// each PE further covers `vector_width` filters with its lanes.
struct Parallelism {
  std::int64_t hp = 1, wp = 1, kp = 1, fp = 1;

  std::int64_t pes() const { return hp * wp * kp * fp; }
  friend auto operator<=>(const Parallelism&, const Parallelism&) = default;
};

/// A complete per-layer schedule. The inner order is shared by every on-chip
/// boundary below the last-level buffer.
struct Config {
  LoopOrder outer;
  LoopOrder inner;
  TileSpec tiles;
  Parallelism parallelism;
  int vector_width = 1;

  /// Lexicographic: outer, inner, tiles, parallelism.
  friend bool operator<(const Config& a, const Config& b);
  friend bool operator==(const Config& a, const Config& b);

  /// Single-line canonical form, also used for hashing.
  std::string to_string() const;
};

/// Stable 64-bit FNV-1a hash of `config.to_string()`, rendered as 16 hex digits.
std::string config_hash(const Config& config);

}  // namespace flexacc

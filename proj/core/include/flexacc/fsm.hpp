#pragma once

#include <cstdint>
#include <vector>

namespace flexacc {

inline constexpr int kFsmMaxDepth = 8;

/// Configuration of one programmable address generator. Loop 0 is outermost.
/// When loop j advances (every loop inside it wrapping), steps[j] is added to
/// the address register, so steps are deltas rather than strides.
struct FsmProgram {
  std::vector<std::int64_t> bounds;
  std::vector<std::int64_t> steps;
  std::uint32_t event_mask = 0;  ///< bit j: raise an event when loop j completes

  int depth() const { return static_cast<int>(bounds.size()); }
  /// Throws ValidationError on inconsistent sizes, depth > kFsmMaxDepth or bound < 1.
  void validate() const;
};

struct FsmOutput {
  std::int64_t address = 0;
  std::uint32_t events = 0;  ///< bit j set on the last state of a pass through loop j

  friend bool operator==(const FsmOutput&, const FsmOutput&) = default;
};

/// Steps the generator through every state. Output length is the product of bounds.
std::vector<FsmOutput> fsm_run(const FsmProgram& program);

/// Incremental form of fsm_run for callers that consume one state at a time.
class FsmIterator {
 public:
  explicit FsmIterator(const FsmProgram& program);
  bool done() const { return done_; }
  FsmOutput current() const;
  void advance();

 private:
  const FsmProgram* program_;
  std::vector<std::int64_t> counters_;
  std::int64_t address_ = 0;
  bool done_ = false;
};

}  // namespace flexacc

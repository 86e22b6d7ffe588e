#include "flexacc/fsm.hpp"

#include "flexacc/error.hpp"

namespace flexacc {

void FsmProgram::validate() const {
  if (bounds.empty()) throw ValidationError("FSM program has no loops");
  if (depth() > kFsmMaxDepth)
    throw ValidationError("FSM depth " + std::to_string(depth()) + " exceeds " +
                          std::to_string(kFsmMaxDepth));
  if (steps.size() != bounds.size())
    throw ValidationError("FSM program needs one step per loop");
  for (auto b : bounds)
    if (b < 1) throw ValidationError("FSM loop bounds must be >= 1");
  if (event_mask >> depth()) throw ValidationError("FSM event mask names a missing loop");
}

FsmIterator::FsmIterator(const FsmProgram& program)
    : program_(&program), counters_(program.bounds.size(), 0) {
  program.validate();
}

FsmOutput FsmIterator::current() const {
  FsmOutput out;
  out.address = address_;
  const int d = program_->depth();
  bool inner_done = true;
  for (int j = d - 1; j >= 0; --j) {
    inner_done = inner_done && counters_[j] == program_->bounds[j] - 1;
    if (inner_done && (program_->event_mask >> j & 1u)) out.events |= 1u << j;
  }
  return out;
}

void FsmIterator::advance() {
  if (done_) return;
  for (int j = program_->depth() - 1; j >= 0; --j) {
    if (counters_[j] + 1 < program_->bounds[j]) {
      counters_[j]++;
      for (int i = j + 1; i < program_->depth(); ++i) counters_[i] = 0;
      address_ += program_->steps[j];
      return;
    }
  }
  done_ = true;
}

std::vector<FsmOutput> fsm_run(const FsmProgram& program) {
  std::vector<FsmOutput> out;
  for (FsmIterator it(program); !it.done(); it.advance()) out.push_back(it.current());
  return out;
}

}  // namespace flexacc

#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "flexacc/error.hpp"
#include "flexacc/fsm.hpp"
#include "flexacc/validate.hpp"

using namespace flexacc;

namespace {

// Literal nested loops: every increment of loop j adds steps[j] to a running address.
std::vector<FsmOutput> nested_loops(const FsmProgram& p) {
  std::vector<FsmOutput> out;
  std::int64_t addr = 0;
  std::vector<std::int64_t> idx(p.depth(), 0);
  std::function<void(int)> loop = [&](int j) {
    if (j == p.depth()) {
      FsmOutput o{addr, 0};
      for (int e = 0; e < p.depth(); ++e) {
        bool last = (p.event_mask >> e) & 1u;
        for (int i = e; i < p.depth(); ++i) last = last && idx[i] == p.bounds[i] - 1;
        if (last) o.events |= 1u << e;
      }
      out.push_back(o);
      return;
    }
    for (idx[j] = 0; idx[j] < p.bounds[j]; ++idx[j]) {
      if (idx[j] > 0) addr += p.steps[j];
      loop(j + 1);
    }
  };
  loop(0);
  return out;
}

}  // namespace

TEST(Fsm, TwoLoopWorkedExample) {
  FsmProgram p{{2, 3}, {10, 1}, 0b10};
  auto out = fsm_run(p);
  std::vector<std::int64_t> addr;
  for (auto& o : out) addr.push_back(o.address);
  EXPECT_EQ(addr, (std::vector<std::int64_t>{0, 1, 2, 12, 13, 14}));
  EXPECT_EQ(out[2].events, 0b10u);
  EXPECT_EQ(out[5].events, 0b10u);
  EXPECT_EQ(out[1].events, 0u);
}

TEST(Fsm, OuterEventFiresOnlyOnTheFinalState) {
  FsmProgram p{{2, 2, 2}, {4, 2, 1}, 0b111};
  auto out = fsm_run(p);
  ASSERT_EQ(out.size(), 8u);
  EXPECT_EQ(out.back().events, 0b111u);
  EXPECT_EQ(out[3].events, 0b110u);
  EXPECT_EQ(out[0].events, 0u);
}

TEST(Fsm, MatchesNestedLoopsOnRandomPrograms) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = random_fsm_program(rng, 4, 6);
    auto got = fsm_run(p);
    ASSERT_EQ(got, nested_loops(p)) << "trial " << trial;
    ASSERT_EQ(got, fsm_reference(p)) << "trial " << trial;
  }
}

TEST(Fsm, IteratorIsIdempotentWhenDone) {
  FsmProgram p{{1}, {5}, 1};
  FsmIterator it(p);
  EXPECT_EQ(it.current().events, 1u);
  it.advance();
  EXPECT_TRUE(it.done());
  it.advance();
  EXPECT_TRUE(it.done());
}

TEST(Fsm, RejectsMalformedPrograms) {
  EXPECT_THROW(fsm_run(FsmProgram{}), ValidationError);
  EXPECT_THROW(fsm_run(FsmProgram{{2, 0}, {1, 1}, 0}), ValidationError);
  EXPECT_THROW(fsm_run(FsmProgram{{2, 2}, {1}, 0}), ValidationError);
  EXPECT_THROW(fsm_run(FsmProgram{{2}, {1}, 0b10}), ValidationError);
  EXPECT_THROW(fsm_run(FsmProgram{std::vector<std::int64_t>(9, 1),
                                  std::vector<std::int64_t>(9, 0), 0}),
               ValidationError);
}

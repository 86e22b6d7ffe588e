#include <gtest/gtest.h>

#include <set>

#include "flexacc/loop_order.hpp"

using namespace flexacc;

TEST(LoopOrder, EnumeratesAll120DistinctPermutations) {
  auto orders = enumerate_loop_orders();
  ASSERT_EQ(orders.size(), 120u);
  std::set<std::string> names;
  for (const auto& o : orders) names.insert(o.to_string());
  EXPECT_EQ(names.size(), 120u);
  EXPECT_TRUE(std::is_sorted(orders.begin(), orders.end()));
}

TEST(LoopOrder, WorkedExampleReloadPositions) {
  auto o = LoopOrder::parse("WHCKF");
  EXPECT_EQ(o.at(reload_position(o, DataType::Filter)), Dim::K);
  EXPECT_EQ(o.at(reload_position(o, DataType::Input)), Dim::F);
  EXPECT_EQ(o.at(reload_position(o, DataType::Psum)), Dim::F);
}

TEST(LoopOrder, ReloadPositionIsInnermostRelevantLoop) {
  for (const auto& o : enumerate_loop_orders())
    for (auto t : kAllDataTypes) {
      int p = reload_position(o, t);
      EXPECT_TRUE(is_relevant(t, o.at(p)));
      for (int q = p + 1; q < 5; ++q) EXPECT_FALSE(is_relevant(t, o.at(q)));
    }
}

TEST(LoopOrder, ParseRoundTripsAndRejectsGarbage) {
  for (const auto& o : enumerate_loop_orders()) {
    EXPECT_EQ(LoopOrder::parse(o.to_string()), o);
    EXPECT_EQ(LoopOrder::parse(o.to_string(true)), o);
  }
  EXPECT_ANY_THROW(LoopOrder::parse("WHCK"));
  EXPECT_ANY_THROW(LoopOrder::parse("WHCKK"));
  EXPECT_ANY_THROW(LoopOrder::parse("WHCKX"));
}

TEST(LoopOrder, Relevance) {
  EXPECT_FALSE(is_relevant(DataType::Input, Dim::K));
  EXPECT_FALSE(is_relevant(DataType::Psum, Dim::C));
  EXPECT_TRUE(is_relevant(DataType::Filter, Dim::C));
  EXPECT_FALSE(is_relevant(DataType::Filter, Dim::W));
}

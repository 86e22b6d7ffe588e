#include <gtest/gtest.h>

#include "flexacc/arch.hpp"
#include "flexacc/config.hpp"
#include "flexacc/error.hpp"
#include "flexacc/io.hpp"
#include "support.hpp"

using namespace flexacc;

TEST(Arch, RequiredBusWidthForSixClustersOf36Pes) {
  ArchSpec a;
  a.clusters = 6;
  a.pes_per_cluster = 36;
  auto l = test::layer(8, 8, 1, 8, 1, 3, 3, 3);
  EXPECT_DOUBLE_EQ(required_bus_bw(a, l), 8.0);
}

TEST(Arch, BankDemandUsesHalfBanksWhenDoubleBuffered) {
  BufferLevel lv{"L2", 1024, 4, 64, true};
  EXPECT_EQ(lv.usable_bank_bytes(), 128);
  EXPECT_EQ(bank_demand(lv, 0), 0);
  EXPECT_EQ(bank_demand(lv, 1), 1);
  EXPECT_EQ(bank_demand(lv, 128), 1);
  EXPECT_EQ(bank_demand(lv, 129), 2);
}

TEST(Arch, BankAssignmentIsContiguousAndBounded) {
  auto a = assign_banks_by_count(16, {3, 5, 2});
  EXPECT_EQ(a.count(DataType::Input), 3);
  EXPECT_EQ(a.count(DataType::Filter), 5);
  EXPECT_EQ(a.count(DataType::Psum), 2);
  EXPECT_EQ(a.begin[1], a.end[0]);
  EXPECT_EQ(a.owner(0), 0);
  EXPECT_EQ(a.owner(7), 1);
  EXPECT_EQ(a.owner(9), 2);
  EXPECT_THROW(assign_banks_by_count(8, {3, 5, 2}), CapacityError);
}

TEST(Arch, SharesRoundToTheBankCount) {
  for (int banks : {4, 16, 64}) {
    auto b = banks_from_shares(banks, {38.5, 21.5, 40});
    EXPECT_EQ(b[0] + b[1] + b[2], banks);
    for (int v : b) EXPECT_GE(v, 1);
  }
  auto b = banks_from_shares(16, {1, 1, 2});
  EXPECT_EQ(b[2], 8);
}

TEST(Arch, CapacityCheckCountsEveryLevel) {
  auto arch = load_arch(test::data_file("morph.arch"));
  auto l = test::layer(114, 114, 3, 18, 64, 3, 3, 3);
  TileSpec small{{{16, 16, 3, 16, 4}, {8, 8, 3, 8, 2}, {4, 4, 1, 8, 1}}};
  EXPECT_TRUE(fits(l, small, arch));
  TileSpec huge{{layer_extent(l), {8, 8, 3, 8, 2}, {4, 4, 1, 8, 1}}};
  EXPECT_FALSE(fits(l, huge, arch));
  EXPECT_THROW(check_capacity(l, huge, arch), CapacityError);
}

TEST(Arch, ParallelAssignmentMasksIdlePes) {
  auto arch = test::roomy_arch(1, 2, 4, 1);
  auto l = test::layer(3, 5, 1, 1, 2);
  Config c;
  c.parallelism = {2, 1, 2, 1};
  auto m = parallel_assignment(c, arch, l);
  EXPECT_EQ(m.steady_active, 4);
  EXPECT_EQ(m.rounds_per_axis[0], 3);  // H=5 in steps of 2
  EXPECT_EQ(m.rounds, 9);
  EXPECT_EQ(m.edge_active, 2);
  c.parallelism = {3, 3, 1, 1};
  EXPECT_THROW(parallel_assignment(c, arch, l), ValidationError);
}

TEST(Arch, ValidateRejectsInconsistentBusList) {
  auto a = test::roomy_arch(3);
  EXPECT_NO_THROW(a.validate());
  a.bus_bits.pop_back();
  EXPECT_THROW(a.validate(), ValidationError);
}

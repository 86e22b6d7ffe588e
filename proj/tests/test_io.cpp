#include <gtest/gtest.h>

#include "flexacc/error.hpp"
#include "flexacc/io.hpp"
#include "support.hpp"

using namespace flexacc;

namespace {

int parse_error_line(const std::string& text) {
  try {
    parse_network(text, "t.net");
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Io, ShippedFilesLoad) {
  auto c3d = load_network(test::data_file("c3d.net"));
  EXPECT_EQ(c3d.layers.size(), 8u);
  EXPECT_EQ(c3d.layer("layer1").K, 64);
  auto arch = load_arch(test::data_file("morph.arch"));
  EXPECT_EQ(arch.levels.size(), 3u);
  EXPECT_EQ(arch.total_pes(), 96);
  auto table = load_energy(test::data_file("default.energy"));
  EXPECT_DOUBLE_EQ(table.dram_pj_per_bit, 20.0);
  EXPECT_NO_THROW(load_network(test::data_file("tiny.net")));
  EXPECT_NO_THROW(load_network(test::data_file("fig4.net")));
}

TEST(Io, LayerRowsTakeOptionalStridesAndPrecision) {
  auto n = parse_network(
      "name: n\nprecision_bits: 16\nlayers:\n"
      "  - [a, 8, 8, 2, 4, 2, 3, 3, 3]\n"
      "  - [b, 9, 9, 2, 4, 2, 3, 3, 3, 2, 2, 1]\n"
      "  - [c, 9, 9, 2, 4, 2, 3, 3, 3, 1, 1, 1, 4]\n");
  ASSERT_EQ(n.layers.size(), 3u);
  EXPECT_EQ(n.layers[0].precision_bits, 16);
  EXPECT_EQ(n.layers[1].stride_w, 2);
  EXPECT_EQ(n.layers[1].stride_f, 1);
  EXPECT_EQ(n.layers[2].precision_bits, 4);
}

TEST(Io, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("name: n\nlayers:\n  - [a, 8, 8, 2, 4, 2, 3, 3]\n"), 3);
  EXPECT_EQ(parse_error_line("name: n\ncolour: red\nlayers:\n  - [a, 8, 8, 2, 4, 2, 3, 3, 3]\n"),
            2);
  EXPECT_EQ(parse_error_line("name: n\nlayers:\n  - [a, 8, 8, 2, 4, 2, 3, 3, 3]\n"
                             "  - [a, 8, 8, 2, 4, 2, 3, 3, 3]\n"),
            4);
  EXPECT_EQ(parse_error_line("name: n\nlayers:\n  - [a, 8, x, 2, 4, 2, 3, 3, 3]\n"), 3);
  EXPECT_GT(parse_error_line("name: n\nlayers: [[a, 8\n"), 0);
  EXPECT_THROW(parse_network("name: n\n"), ParseError);
}

TEST(Io, InvalidValuesNameTheSource) {
  try {
    parse_network("name: n\nlayers:\n  - [a, 2, 8, 2, 4, 2, 3, 3, 3]\n", "bad.net");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.net:3"), std::string::npos) << e.what();
  }
}

TEST(Io, ArchRejectsUnknownLevelKeysAndBadBusList) {
  const std::string ok =
      "name: a\nclusters: 1\npes_per_cluster: 2\nvector_width: 1\nbus_bits: [8]\nlevels:\n"
      "  - {name: L1, bytes: 1024, banks: 4, word_bits: 8, double_buffered: true}\n"
      "  - {name: L0, bytes: 64, banks: 2, word_bits: 8, double_buffered: false}\n";
  auto a = parse_arch(ok);
  EXPECT_FALSE(a.levels[1].double_buffered);
  EXPECT_THROW(parse_arch(ok + "extra: 1\n"), ParseError);
  std::string no_bus = ok;
  no_bus.replace(no_bus.find("[8]"), 3, "[]");
  EXPECT_THROW(parse_arch(no_bus), Error);
}

TEST(Io, EnergyTableRoundTrips) {
  auto table = load_energy(test::data_file("default.energy"));
  auto again = parse_energy(format_energy(table));
  EXPECT_EQ(again.name, table.name);
  EXPECT_EQ(again.dram_pj_per_bit, table.dram_pj_per_bit);
  EXPECT_EQ(again.noc_pj_per_cycle_per_link, table.noc_pj_per_cycle_per_link);
  ASSERT_EQ(again.sram.size(), table.sram.size());
  for (std::size_t i = 0; i < table.sram.size(); ++i) {
    EXPECT_EQ(again.sram[i].bank_bytes, table.sram[i].bank_bytes);
    EXPECT_EQ(again.sram[i].pj_per_bit, table.sram[i].pj_per_bit);
  }
  EXPECT_THROW(table.sram_pj_per_bit(std::int64_t{1} << 40), ValidationError);
}

TEST(Io, EnergyTableMustBeMonotone) {
  EXPECT_THROW(parse_energy("name: e\ndram_pj_per_bit: 1\nsram:\n  - [64, 0.5]\n  - [16, 0.7]\n"),
               ValidationError);
}

TEST(Io, ScheduleRoundTrips) {
  Config c;
  c.outer = LoopOrder::parse("KWFHC");
  c.inner = LoopOrder::parse("CKFHW");
  c.tiles.levels = {{8, 8, 3, 16, 4}, {4, 4, 3, 8, 2}, {2, 2, 1, 8, 1}};
  c.parallelism = {2, 3, 1, 1};
  c.vector_width = 8;
  auto text = format_schedule("net", {{"conv1", c}});
  auto back = parse_schedule(text);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].layer, "conv1");
  EXPECT_EQ(back[0].config, c);
  EXPECT_EQ(format_schedule("net", back), text);
  EXPECT_THROW(parse_schedule("{\"format\": \"other\"}"), ParseError);
  EXPECT_THROW(parse_schedule("not json"), ParseError);
}

TEST(Io, MissingFileIsAParseError) {
  EXPECT_THROW(load_network("/nonexistent/x.net"), ParseError);
}

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "flexacc/io.hpp"
#include "flexacc/optimizer.hpp"
#include "flexacc/report.hpp"
#include "support.hpp"

using namespace flexacc;

namespace {

struct Report : ::testing::Test {
  static void SetUpTestSuite() {
    auto arch = load_arch(test::data_file("morph.arch"));
    auto table = load_energy(test::data_file("default.energy"));
    net = new Network(load_network(test::data_file("tiny.net")));
    SearchOptions o;
    o.tile_points = 3;
    cmp = new NetworkComparison(compare_network(*net, arch, table, Objective::Energy, o));
  }
  static void TearDownTestSuite() {
    delete net;
    delete cmp;
  }
  static Network* net;
  static NetworkComparison* cmp;
};
Network* Report::net = nullptr;
NetworkComparison* Report::cmp = nullptr;

}  // namespace

TEST_F(Report, CsvHasVersionHeaderAndOneRowPerLayer) {
  auto csv = format_report_csv(net->name, Objective::Energy, cmp->optimized, &cmp->baseline);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# flexacc report v1");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("network,layer,objective,", 0), 0u);
  std::size_t rows = 0;
  std::string last;
  while (std::getline(in, line)) ++rows, last = line;
  EXPECT_EQ(rows, net->layers.size() + 2);
  EXPECT_NE(last.find("BASELINE"), std::string::npos);
}

TEST_F(Report, OutputIsByteStable) {
  auto a = format_report_csv(net->name, Objective::Energy, cmp->optimized, &cmp->baseline);
  auto b = format_report_csv(net->name, Objective::Energy, cmp->optimized, &cmp->baseline);
  EXPECT_EQ(a, b);
  EXPECT_EQ(format_report_json(net->name, Objective::Energy, cmp->optimized, &cmp->baseline),
            format_report_json(net->name, Objective::Energy, cmp->optimized, &cmp->baseline));
}

TEST_F(Report, JsonCarriesSchemaAndRatios) {
  auto j = nlohmann::json::parse(
      format_report_json(net->name, Objective::Energy, cmp->optimized, &cmp->baseline));
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["layers"].size(), net->layers.size());
  EXPECT_GE(j["summary"]["energy_ratio"].get<double>(), 1.0);
  auto bare = nlohmann::json::parse(
      format_report_json(net->name, Objective::Energy, cmp->optimized, nullptr));
  EXPECT_FALSE(bare.contains("baseline"));
}

TEST(ReportFormat, DoublesUseTwelveSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1234567.25), "1234567.25");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333");
}

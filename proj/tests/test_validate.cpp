#include <gtest/gtest.h>

#include "flexacc/error.hpp"
#include "flexacc/io.hpp"
#include "flexacc/validate.hpp"
#include "support.hpp"

using namespace flexacc;

TEST(Validate, RandomConfigsFitTheirArch) {
  auto arch = load_arch(test::data_file("morph.arch"));
  auto net = load_network(test::data_file("c3d.net"));
  std::mt19937_64 rng(3);
  for (const auto& l : net.layers)
    for (int i = 0; i < 5; ++i) {
      auto c = random_config(l, arch, rng);
      EXPECT_TRUE(fits(l, c.tiles, arch)) << c.to_string();
      EXPECT_LE(c.parallelism.pes(), arch.total_pes());
    }
}

TEST(Validate, ShippedDeskNetworkPasses) {
  auto arch = load_arch(test::data_file("morph.arch"));
  auto net = load_network(test::data_file("tiny.net"));
  ValidationOptions o;
  o.trials = 30;
  for (const auto& check : run_validation(net, arch, o)) {
    EXPECT_EQ(check.failed, 0) << check.name << ": " << check.first_failure;
    EXPECT_GT(check.passed, 0) << check.name;
  }
}

TEST(Validate, HaloMutationIsCaught) {
  auto arch = load_arch(test::data_file("morph.arch"));
  auto net = load_network(test::data_file("tiny.net"));
  ValidationOptions o;
  o.trials = 20;
  o.traffic.halo_bias = 1;
  std::int64_t failed = 0;
  for (const auto& check : run_validation(net, arch, o)) failed += check.failed;
  EXPECT_GT(failed, 0);
}

TEST(Validate, ZeroTrialsIsVacuous) {
  auto arch = load_arch(test::data_file("morph.arch"));
  auto net = load_network(test::data_file("tiny.net"));
  ValidationOptions o;
  o.trials = 0;
  for (const auto& check : run_validation(net, arch, o)) {
    EXPECT_EQ(check.failed, 0);
    EXPECT_EQ(check.passed, 0);
  }
}

TEST(Validate, RefusesLayersTooLargeToSimulate) {
  auto arch = load_arch(test::data_file("morph.arch"));
  auto net = load_network(test::data_file("c3d.net"));
  ValidationOptions o;
  o.trials = 1;
  EXPECT_THROW(run_validation(net, arch, o), ValidationError);
}

#include <gtest/gtest.h>

#include "flexacc/error.hpp"
#include "flexacc/layer.hpp"
#include "support.hpp"

using namespace flexacc;

TEST(Layer, PsumWidthAddsProductAndAccumulationBits) {
  EXPECT_EQ(psum_width_bits(8, 3, 3, 3, 3), 23);
  EXPECT_EQ(psum_width_bits(8, 1, 1, 1, 1), 16);
  EXPECT_EQ(psum_width_bits(8, 3, 3, 3, 512), 16 + 14);
  EXPECT_EQ(psum_width_bits(16, 2, 2, 1, 1), 34);
}

TEST(Layer, OutputShapeWithStrides) {
  auto l = test::layer(9, 7, 2, 6, 5, 3, 3, 2);
  l.stride_w = 2;
  l.stride_f = 2;
  auto o = output_shape(l);
  EXPECT_EQ(o.W, 4);
  EXPECT_EQ(o.H, 5);
  EXPECT_EQ(o.F, 3);
  EXPECT_EQ(o.K, 5);
  EXPECT_EQ(macc_count(l), 3 * 5 * 4 * 5 * 2 * 3 * 3 * 2);
}

TEST(Layer, FilterLargerThanInputIsRejected) {
  EXPECT_THROW(test::layer(2, 8, 1, 4, 1, 1, 3, 1).validate(), ValidationError);
  EXPECT_THROW(test::layer(8, 2, 1, 4, 1, 3, 1, 1).validate(), ValidationError);
  EXPECT_THROW(test::layer(8, 8, 1, 2, 1, 1, 1, 3).validate(), ValidationError);
  EXPECT_THROW(test::layer(0, 8, 1, 2, 1).validate(), ValidationError);
  EXPECT_NO_THROW(test::layer(3, 3, 1, 3, 1, 3, 3, 3).validate());
}

TEST(Layer, PsumBitsTrackLayerPrecision) {
  auto l = test::layer(8, 8, 64, 8, 8, 3, 3, 3);
  EXPECT_EQ(activation_bits(l), 8);
  EXPECT_EQ(psum_bits(l), psum_width_bits(8, 3, 3, 3, 64));
  l.precision_bits = 4;
  EXPECT_EQ(psum_bits(l), psum_width_bits(4, 3, 3, 3, 64));
}

TEST(Layer, NetworkLookupByName) {
  Network n;
  n.layers = {test::layer(4, 4, 1, 1, 1), test::layer(5, 5, 1, 1, 1)};
  n.layers[1].name = "second";
  EXPECT_EQ(n.layer("second").W, 5);
  EXPECT_ANY_THROW(n.layer("absent"));
}

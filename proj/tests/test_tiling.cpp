#include <gtest/gtest.h>

#include "flexacc/error.hpp"
#include "flexacc/tiling.hpp"
#include "support.hpp"

using namespace flexacc;

TEST(Tiling, InputExtentCoversTheReceptiveField) {
  EXPECT_EQ(input_tile_extent(1, 3, 1), 3);
  EXPECT_EQ(input_tile_extent(4, 3, 1), 6);
  EXPECT_EQ(input_tile_extent(4, 3, 2), 9);
  EXPECT_EQ(halo_overlap(3, 1), 2);
  EXPECT_EQ(halo_overlap(3, 3), 0);
  EXPECT_EQ(halo_overlap(2, 3), 0);
}

TEST(Tiling, LayerExtentIsInOutputUnitsForSlidingDims) {
  auto l = test::layer(10, 8, 3, 6, 5, 3, 3, 3);
  auto e = layer_extent(l);
  EXPECT_EQ(e.w, 8);
  EXPECT_EQ(e.h, 6);
  EXPECT_EQ(e.f, 4);
  EXPECT_EQ(e.c, 3);
  EXPECT_EQ(e.k, 5);
}

TEST(Tiling, IterationCountsRoundUp) {
  TileExtent total{8, 6, 3, 5, 4};
  auto n = iteration_counts(total, TileExtent{3, 6, 2, 5, 1});
  EXPECT_EQ(n.w, 3);
  EXPECT_EQ(n.h, 1);
  EXPECT_EQ(n.c, 2);
  EXPECT_EQ(n.k, 1);
  EXPECT_EQ(n.f, 4);
}

TEST(Tiling, ElementsPerDatatype) {
  auto l = test::layer(10, 8, 3, 6, 5, 3, 3, 3);
  TileExtent t{2, 2, 3, 4, 1};
  EXPECT_EQ(tile_elements(l, t, DataType::Input), 4 * 4 * 3 * 3);
  EXPECT_EQ(tile_elements(l, t, DataType::Filter), 27 * 3 * 4);
  EXPECT_EQ(tile_elements(l, t, DataType::Psum), 2 * 2 * 4);
  EXPECT_EQ(element_bytes(l, DataType::Input), 1);
  EXPECT_EQ(element_bytes(l, DataType::Psum), 3);  // 8+8+ceil(log2 81) = 23 bits
}

TEST(Tiling, ValidateRejectsGrowingOrEmptyTiles) {
  auto l = test::layer(10, 8, 3, 6, 5, 3, 3, 3);
  TileSpec ok{{layer_extent(l), {2, 2, 1, 1, 1}}};
  EXPECT_NO_THROW(validate_tiles(l, ok));
  TileSpec grows{{{2, 2, 1, 1, 1}, {4, 2, 1, 1, 1}}};
  EXPECT_THROW(validate_tiles(l, grows), ValidationError);
  TileSpec zero{{{0, 2, 1, 1, 1}}};
  EXPECT_THROW(validate_tiles(l, zero), ValidationError);
  EXPECT_THROW(validate_tiles(l, TileSpec{}), ValidationError);
}

TEST(Tiling, MetadataCollectsCountsBytesAndHalo) {
  auto l = test::layer(10, 8, 3, 6, 5, 3, 1, 2);
  l.stride_w = 2;
  TileSpec ts{{{4, 8, 3, 5, 5}, {1, 2, 1, 5, 1}}};
  auto m = make_metadata(l, ts);
  ASSERT_EQ(m.iterations.size(), 2u);
  EXPECT_EQ(m.iterations[0].w, 2);  // output W is 5
  EXPECT_EQ(m.iterations[1].w, 4);
  EXPECT_EQ(m.iterations[1].h, 3);  // clipped H extent 6 in tiles of 2
  EXPECT_EQ(m.halo[index(Dim::W)], 0);
  EXPECT_EQ(m.halo[index(Dim::H)], 2);
  EXPECT_EQ(m.halo[index(Dim::F)], 1);
  EXPECT_EQ(m.output_elements, 5 * 6 * 5 * 5);
  EXPECT_EQ(m.tile_bytes[1][index(DataType::Filter)], 6 * 5);
}

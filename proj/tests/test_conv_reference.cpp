#include <gtest/gtest.h>

#include <random>

#include "flexacc/conv_reference.hpp"
#include "flexacc/error.hpp"
#include "support.hpp"

using namespace flexacc;

namespace {

// Plain 2D convolution over [C][W][H] images with [K][C][S][R] filters.
std::vector<Value> conv2d(const std::vector<Value>& in, const std::vector<Value>& w,
                          std::int64_t W, std::int64_t H, std::int64_t C, std::int64_t K,
                          std::int64_t S, std::int64_t R, std::int64_t sw, std::int64_t sh) {
  const std::int64_t Wo = (W - S) / sw + 1, Ho = (H - R) / sh + 1;
  std::vector<Value> out(K * Wo * Ho, 0);
  for (std::int64_t k = 0; k < K; ++k)
    for (std::int64_t x = 0; x < Wo; ++x)
      for (std::int64_t y = 0; y < Ho; ++y) {
        Value acc = 0;
        for (std::int64_t c = 0; c < C; ++c)
          for (std::int64_t s = 0; s < S; ++s)
            for (std::int64_t r = 0; r < R; ++r)
              acc += in[(c * W + x * sw + s) * H + y * sh + r] * w[((k * C + c) * S + s) * R + r];
        out[(k * Wo + x) * Ho + y] = acc;
      }
  return out;
}

// im2col lowering followed by a dense matrix product.
Tensor conv3d_im2col(const Tensor& input, const Tensor& filters, const LayerShape& l) {
  auto o = output_shape(l);
  const std::int64_t patch = l.T * l.C * l.S * l.R;
  const std::int64_t cols = o.F * o.W * o.H;
  std::vector<Value> lowered(patch * cols);
  for (std::int64_t f = 0; f < o.F; ++f)
    for (std::int64_t w = 0; w < o.W; ++w)
      for (std::int64_t h = 0; h < o.H; ++h) {
        std::int64_t col = (f * o.W + w) * o.H + h;
        std::int64_t row = 0;
        for (std::int64_t t = 0; t < l.T; ++t)
          for (std::int64_t c = 0; c < l.C; ++c)
            for (std::int64_t s = 0; s < l.S; ++s)
              for (std::int64_t r = 0; r < l.R; ++r)
                lowered[row++ * cols + col] =
                    input.at({f * l.stride_f + t, c, w * l.stride_w + s, h * l.stride_h + r});
      }
  Tensor out(output_dims(l));
  auto fl = filters.data();  // [K][T][C][S][R] is already one row per k
  for (std::int64_t k = 0; k < l.K; ++k)
    for (std::int64_t col = 0; col < cols; ++col) {
      Value acc = 0;
      for (std::int64_t p = 0; p < patch; ++p) acc += fl[k * patch + p] * lowered[p * cols + col];
      std::int64_t f = col / (o.W * o.H), w = col / o.H % o.W, h = col % o.H;
      out.at({f, k, w, h}) = acc;
    }
  return out;
}

}  // namespace

TEST(ConvReference, MatchesIm2colOnRandomLayers) {
  std::mt19937_64 rng(7);
  auto U = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  for (int trial = 0; trial < 60; ++trial) {
    auto l = test::layer(0, 0, U(1, 4), 0, U(1, 4), U(1, 3), U(1, 3), U(1, 3));
    l.W = U(l.S, 8), l.H = U(l.R, 8), l.F = U(l.T, 6);
    l.stride_w = U(1, 2), l.stride_h = U(1, 2), l.stride_f = U(1, 2);
    auto in = random_tensor(input_dims(l), trial);
    auto fl = random_tensor(filter_dims(l), trial + 1000);
    ASSERT_EQ(conv3d_reference(in, fl, l), conv3d_im2col(in, fl, l)) << "trial " << trial;
  }
}

TEST(ConvReference, SingleFrameReducesTo2D) {
  std::mt19937_64 rng(11);
  auto U = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  for (int trial = 0; trial < 50; ++trial) {
    auto l = test::layer(0, 0, U(1, 4), 1, U(1, 4), U(1, 3), U(1, 3), 1);
    l.W = U(l.S, 8), l.H = U(l.R, 8);
    l.stride_w = U(1, 2), l.stride_h = U(1, 2);
    auto in = random_tensor(input_dims(l), trial);
    auto fl = random_tensor(filter_dims(l), trial + 50);
    auto out = conv3d_reference(in, fl, l);
    auto in_v = std::vector<Value>(in.data().begin(), in.data().end());
    auto fl_v = std::vector<Value>(fl.data().begin(), fl.data().end());
    auto expect = conv2d(in_v, fl_v, l.W, l.H, l.C, l.K, l.S, l.R, l.stride_w, l.stride_h);
    ASSERT_TRUE(std::equal(expect.begin(), expect.end(), out.data().begin(), out.data().end()))
        << "trial " << trial;
  }
}

TEST(ConvReference, HandComputedPoint) {
  auto l = test::layer(2, 2, 1, 1, 1, 2, 2, 1);
  Tensor in(input_dims(l), {1, 2, 3, 4});
  Tensor fl(filter_dims(l), {1, 10, 100, 1000});
  auto out = conv3d_reference(in, fl, l);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.data()[0], 1 + 20 + 300 + 4000);
}

TEST(ConvReference, WrongTensorShapeThrows) {
  auto l = test::layer(4, 4, 2, 3, 2, 3, 3, 3);
  auto fl = random_tensor(filter_dims(l), 1);
  EXPECT_THROW(conv3d_reference(Tensor({3, 2, 4, 5}), fl, l), DimensionError);
  EXPECT_THROW(conv3d_reference(random_tensor(input_dims(l), 2), Tensor({1}), l),
               DimensionError);
}

#include "flexacc/conv_reference.hpp"

#include "flexacc/error.hpp"

namespace flexacc {
namespace {

void check_dims(const Tensor& t, const std::vector<std::int64_t>& want, const char* tensor,
                const char* axes) {
  if (t.rank() != want.size())
    throw DimensionError(std::string(tensor) + " has rank " + std::to_string(t.rank()) +
                         ", expected " + std::to_string(want.size()));
  for (std::size_t i = 0; i < want.size(); ++i)
    if (t.dim(i) != want[i])
      throw DimensionError(std::string(tensor) + " axis " + axes[i] + " is " +
                           std::to_string(t.dim(i)) + ", expected " + std::to_string(want[i]));
}

}  // namespace

std::vector<std::int64_t> input_dims(const LayerShape& l) { return {l.F, l.C, l.W, l.H}; }

std::vector<std::int64_t> filter_dims(const LayerShape& l) { return {l.K, l.T, l.C, l.S, l.R}; }

std::vector<std::int64_t> output_dims(const LayerShape& l) {
  auto o = output_shape(l);
  return {o.F, o.K, o.W, o.H};
}

Tensor conv3d_reference(const Tensor& input, const Tensor& filters, const LayerShape& l) {
  l.validate();
  check_dims(input, input_dims(l), "input", "FCWH");
  check_dims(filters, filter_dims(l), "filters", "KTCSR");
  auto o = output_shape(l);
  Tensor out(output_dims(l));
  auto in = input.data();
  auto fl = filters.data();
  auto dst = out.data();
  const std::int64_t W = l.W, H = l.H, C = l.C;
  for (std::int64_t f = 0; f < o.F; ++f)
    for (std::int64_t k = 0; k < o.K; ++k)
      for (std::int64_t w = 0; w < o.W; ++w)
        for (std::int64_t h = 0; h < o.H; ++h) {
          Value acc = 0;
          for (std::int64_t r = 0; r < l.R; ++r)
            for (std::int64_t s = 0; s < l.S; ++s)
              for (std::int64_t c = 0; c < C; ++c)
                for (std::int64_t t = 0; t < l.T; ++t) {
                  auto fi = f * l.stride_f + t;
                  auto wi = w * l.stride_w + s;
                  auto hi = h * l.stride_h + r;
                  acc += in[((fi * C + c) * W + wi) * H + hi] *
                         fl[(((k * l.T + t) * C + c) * l.S + s) * l.R + r];
                }
          dst[((f * o.K + k) * o.W + w) * o.H + h] = acc;
        }
  return out;
}

}  // namespace flexacc

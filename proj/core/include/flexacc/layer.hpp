#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flexacc {

/// One 3D convolution layer. Spatial extents are input extents; the filter is
/// R (pairs with H) x S (pairs with W) x T (pairs with F) x C, and there are K of them.
struct LayerShape {
  std::string name;
  std::int64_t W = 1, H = 1, C = 1, F = 1, K = 1;
  std::int64_t R = 1, S = 1, T = 1;
  std::int64_t stride_w = 1, stride_h = 1, stride_f = 1;
  int precision_bits = 8;

  /// Throws ValidationError naming the offending field.
  void validate() const;

  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

struct OutputShape {
  std::int64_t F = 0, K = 0, W = 0, H = 0;
  friend bool operator==(const OutputShape&, const OutputShape&) = default;
};

OutputShape output_shape(const LayerShape& layer);

/// Multiply-accumulates performed by the layer.
std::int64_t macc_count(const LayerShape& layer);

/// Bits needed for an overflow-free partial sum: 2P + ceil(log2(R*S*T*C)).
int psum_width_bits(int precision_bits, std::int64_t R, std::int64_t S, std::int64_t T,
                    std::int64_t C);

/// Storage width of one activation/weight element.
int activation_bits(const LayerShape& layer);
int psum_bits(const LayerShape& layer);

struct Network {
  std::string name;
  std::vector<LayerShape> layers;

  const LayerShape& layer(const std::string& layer_name) const;
};

}  // namespace flexacc

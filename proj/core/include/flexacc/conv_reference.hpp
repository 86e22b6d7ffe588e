#pragma once

#include "flexacc/layer.hpp"
#include "flexacc/tensor.hpp"

namespace flexacc {

/// Expected tensor extents for a layer, in the fixed layouts used throughout:
/// inputs [F][C][W][H], filters [K][T][C][S][R], outputs [F_out][K][W_out][H_out].
std::vector<std::int64_t> input_dims(const LayerShape& layer);
std::vector<std::int64_t> filter_dims(const LayerShape& layer);
std::vector<std::int64_t> output_dims(const LayerShape& layer);

/// Brute-force strided 3D convolution. Throws DimensionError naming the axis
/// that disagrees with the layer.
Tensor conv3d_reference(const Tensor& input, const Tensor& filters, const LayerShape& layer);

}  // namespace flexacc

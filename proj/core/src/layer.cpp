#include "flexacc/layer.hpp"

#include <bit>

#include "flexacc/error.hpp"

namespace flexacc {
namespace {

void require_positive(std::int64_t v, const char* field) {
  if (v < 1) throw ValidationError(std::string(field) + " must be >= 1 (got " + std::to_string(v) + ")");
}

}  // namespace

void LayerShape::validate() const {
  require_positive(W, "W");
  require_positive(H, "H");
  require_positive(C, "C");
  require_positive(F, "F");
  require_positive(K, "K");
  require_positive(R, "R");
  require_positive(S, "S");
  require_positive(T, "T");
  require_positive(stride_w, "stride_w");
  require_positive(stride_h, "stride_h");
  require_positive(stride_f, "stride_f");
  if (precision_bits < 1 || precision_bits > 32)
    throw ValidationError("precision_bits must be in [1, 32]");
  // S slides along W and R along H (see conv3d_reference indexing).
  if (S > W) throw ValidationError("S must not exceed W in layer " + name);
  if (R > H) throw ValidationError("R must not exceed H in layer " + name);
  if (T > F) throw ValidationError("T must not exceed F in layer " + name);
}

OutputShape output_shape(const LayerShape& l) {
  return {(l.F - l.T) / l.stride_f + 1, l.K, (l.W - l.S) / l.stride_w + 1,
          (l.H - l.R) / l.stride_h + 1};
}

std::int64_t macc_count(const LayerShape& l) {
  auto o = output_shape(l);
  return o.F * o.K * o.W * o.H * l.R * l.S * l.T * l.C;
}

int psum_width_bits(int precision_bits, std::int64_t R, std::int64_t S, std::int64_t T,
                    std::int64_t C) {
  auto terms = static_cast<std::uint64_t>(R * S * T * C);
  int log_term = terms <= 1 ? 0 : std::bit_width(terms - 1);
  return 2 * precision_bits + log_term;
}

int activation_bits(const LayerShape& l) { return l.precision_bits; }

int psum_bits(const LayerShape& l) { return psum_width_bits(l.precision_bits, l.R, l.S, l.T, l.C); }

const LayerShape& Network::layer(const std::string& layer_name) const {
  for (const auto& l : layers)
    if (l.name == layer_name) return l;
  throw ValidationError("no layer named '" + layer_name + "' in network " + name);
}

}  // namespace flexacc

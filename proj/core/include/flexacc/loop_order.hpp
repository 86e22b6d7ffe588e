#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace flexacc {

/// The five tiled dimensions. R, S and T are never tiled.
enum class Dim : std::uint8_t { W = 0, H = 1, C = 2, K = 3, F = 4 };
inline constexpr std::array<Dim, 5> kAllDims = {Dim::W, Dim::H, Dim::C, Dim::K, Dim::F};
inline constexpr int kNumDims = 5;

char dim_letter(Dim d);
inline int index(Dim d) { return static_cast<int>(d); }

enum class DataType : std::uint8_t { Input = 0, Filter = 1, Psum = 2 };
inline constexpr std::array<DataType, 3> kAllDataTypes = {DataType::Input, DataType::Filter,
                                                          DataType::Psum};
inline int index(DataType t) { return static_cast<int>(t); }
std::string_view to_string(DataType t);

/// Whether a datatype's tile changes when the given dimension advances.
constexpr bool is_relevant(DataType t, Dim d) {
  switch (t) {
    case DataType::Input: return d != Dim::K;
    case DataType::Filter: return d == Dim::C || d == Dim::K;
    case DataType::Psum: return d != Dim::C;
  }
  return false;
}

/// A permutation of {W,H,C,K,F}, outermost first.
class LoopOrder {
 public:
  LoopOrder();  // [WHCKF]
  explicit LoopOrder(std::array<Dim, 5> dims);

  /// Accepts upper or lower case, e.g. "WHCKF" or "cfwhk". Throws ValidationError.
  static LoopOrder parse(std::string_view text);

  Dim at(int position) const { return dims_[position]; }
  int position(Dim d) const { return positions_[index(d)]; }
  const std::array<Dim, 5>& dims() const { return dims_; }

  std::string to_string(bool lower_case = false) const;

  friend bool operator==(const LoopOrder& a, const LoopOrder& b) { return a.dims_ == b.dims_; }
  /// Lexicographic on the letter string.
  friend bool operator<(const LoopOrder& a, const LoopOrder& b) {
    return a.to_string() < b.to_string();
  }

 private:
  std::array<Dim, 5> dims_;
  std::array<int, 5> positions_;
};

/// All 120 orders in lexicographic letter order (CFHKW first).
std::vector<LoopOrder> enumerate_loop_orders();

/// Loop index (0 = outermost) at which the next tile of `type` is loaded:
/// the innermost loop labelled with a dimension relevant to the datatype.
int reload_position(const LoopOrder& order, DataType type);

}  // namespace flexacc

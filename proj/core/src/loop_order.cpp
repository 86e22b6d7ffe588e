#include "flexacc/loop_order.hpp"

#include <algorithm>
#include <cctype>

#include "flexacc/error.hpp"

namespace flexacc {

char dim_letter(Dim d) {
  static constexpr char kLetters[] = {'W', 'H', 'C', 'K', 'F'};
  return kLetters[index(d)];
}

std::string_view to_string(DataType t) {
  switch (t) {
    case DataType::Input: return "inputs";
    case DataType::Filter: return "filters";
    case DataType::Psum: return "psums";
  }
  return "?";
}

LoopOrder::LoopOrder() : LoopOrder({Dim::W, Dim::H, Dim::C, Dim::K, Dim::F}) {}

LoopOrder::LoopOrder(std::array<Dim, 5> dims) : dims_(dims) {
  positions_.fill(-1);
  for (int i = 0; i < 5; ++i) {
    if (positions_[index(dims_[i])] != -1) throw ValidationError("loop order repeats a dimension");
    positions_[index(dims_[i])] = i;
  }
}

LoopOrder LoopOrder::parse(std::string_view text) {
  if (text.size() != 5)
    throw ValidationError("loop order '" + std::string(text) + "' must have 5 letters");
  std::array<Dim, 5> dims{};
  for (int i = 0; i < 5; ++i) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
    auto it = std::find_if(kAllDims.begin(), kAllDims.end(),
                           [c](Dim d) { return dim_letter(d) == c; });
    if (it == kAllDims.end())
      throw ValidationError("loop order '" + std::string(text) + "' has unknown dimension '" +
                            std::string(1, text[i]) + "'");
    dims[i] = *it;
  }
  try {
    return LoopOrder(dims);
  } catch (const ValidationError&) {
    throw ValidationError("loop order '" + std::string(text) + "' repeats a dimension");
  }
}

std::string LoopOrder::to_string(bool lower_case) const {
  std::string s;
  for (auto d : dims_) {
    char c = dim_letter(d);
    s += lower_case ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : c;
  }
  return s;
}

std::vector<LoopOrder> enumerate_loop_orders() {
  std::string letters = "CFHKW";
  std::vector<LoopOrder> out;
  out.reserve(120);
  do {
    out.push_back(LoopOrder::parse(letters));
  } while (std::next_permutation(letters.begin(), letters.end()));
  return out;
}

int reload_position(const LoopOrder& order, DataType type) {
  for (int p = 4; p >= 0; --p)
    if (is_relevant(type, order.at(p))) return p;
  return 0;
}

}  // namespace flexacc

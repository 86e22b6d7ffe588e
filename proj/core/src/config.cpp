#include "flexacc/config.hpp"

#include <cstdio>
#include <tuple>

namespace flexacc {

bool operator<(const Config& a, const Config& b) {
  return std::tie(a.outer, a.inner, a.tiles, a.parallelism, a.vector_width) <
         std::tie(b.outer, b.inner, b.tiles, b.parallelism, b.vector_width);
}

bool operator==(const Config& a, const Config& b) {
  return a.outer == b.outer && a.inner == b.inner && a.tiles == b.tiles &&
         a.parallelism == b.parallelism && a.vector_width == b.vector_width;
}

std::string Config::to_string() const {
  std::string s = "outer=" + outer.to_string() + " inner=" + inner.to_string(true) + " tiles=";
  for (std::size_t l = 0; l < tiles.levels.size(); ++l) {
    const auto& t = tiles.levels[l];
    if (l) s += '/';
    s += std::to_string(t.w) + 'x' + std::to_string(t.h) + 'x' + std::to_string(t.c) + 'x' +
         std::to_string(t.k) + 'x' + std::to_string(t.f);
  }
  s += " par=" + std::to_string(parallelism.hp) + 'x' + std::to_string(parallelism.wp) + 'x' +
       std::to_string(parallelism.kp) + 'x' + std::to_string(parallelism.fp) +
       " vw=" + std::to_string(vector_width);
  return s;
}

std::string config_hash(const Config& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : config.to_string()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace flexacc

#include "flexacc/tensor.hpp"

#include <numeric>
#include <random>

#include "flexacc/error.hpp"

namespace flexacc {
namespace {

std::size_t element_count(const std::vector<std::int64_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) {
    if (d < 0) throw DimensionError("negative tensor extent");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::int64_t> dims)
    : dims_(std::move(dims)), data_(element_count(dims_), 0) {}

Tensor::Tensor(std::vector<std::int64_t> dims, std::vector<Value> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  if (data_.size() != element_count(dims_))
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match extents (" + std::to_string(element_count(dims_)) +
                         " expected)");
}

std::size_t Tensor::offset(std::initializer_list<std::int64_t> index) const {
  if (index.size() != dims_.size()) throw DimensionError("index rank mismatch");
  std::size_t off = 0;
  std::size_t axis = 0;
  for (auto i : index) {
    if (i < 0 || i >= dims_[axis])
      throw DimensionError("index " + std::to_string(i) + " out of range on axis " +
                           std::to_string(axis));
    off = off * static_cast<std::size_t>(dims_[axis]) + static_cast<std::size_t>(i);
    ++axis;
  }
  return off;
}

Tensor random_tensor(std::vector<std::int64_t> dims, std::uint64_t seed, Value lo, Value hi) {
  Tensor t(std::move(dims));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Value> dist(lo, hi);
  for (auto& v : t.data()) v = dist(rng);
  return t;
}

}  // namespace flexacc

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace flexacc {

using Value = std::int64_t;

/// Dense row-major integer tensor; the last dimension varies fastest.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::int64_t> dims);
  Tensor(std::vector<std::int64_t> dims, std::vector<Value> data);

  const std::vector<std::int64_t>& dims() const { return dims_; }
  std::int64_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }

  std::span<const Value> data() const { return data_; }
  std::span<Value> data() { return data_; }

  std::size_t offset(std::initializer_list<std::int64_t> index) const;
  Value& at(std::initializer_list<std::int64_t> index) { return data_[offset(index)]; }
  Value at(std::initializer_list<std::int64_t> index) const { return data_[offset(index)]; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::int64_t> dims_;
  std::vector<Value> data_;
};

/// Fills a tensor with uniform integers in [lo, hi] from a seeded engine.
Tensor random_tensor(std::vector<std::int64_t> dims, std::uint64_t seed, Value lo = -8,
                     Value hi = 8);

}  // namespace flexacc

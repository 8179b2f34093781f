#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tocgen::nn {

/// Dense row-major tensor, 64-bit values.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s);
  static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }
  static Tensor from(std::vector<int> s, std::vector<double> d);

  int ndim() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape.at(static_cast<size_t>(i)); }
  std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }

  // 2-d accessors
  int rows() const { return shape.at(0); }
  int cols() const { return shape.at(1); }
  double& at(int i, int j) { return data[static_cast<size_t>(i) * cols() + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * cols() + j]; }

  void zero() { std::fill(data.begin(), data.end(), 0.0); }
  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  std::string shape_str() const;
};

/// Named handle on a trainable parameter and its gradient accumulator.
struct ParamRef {
  std::string name;
  Tensor* value = nullptr;
  Tensor* grad = nullptr;
};

}  // namespace tocgen::nn

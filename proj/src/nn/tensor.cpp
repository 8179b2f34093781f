#include "tocgen/nn/tensor.hpp"

#include <numeric>
#include <sstream>

#include "tocgen/errors.hpp"

namespace tocgen::nn {

namespace {

std::int64_t numel_of(const std::vector<int>& shape) {
  std::int64_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw DataError("tensor: non-positive dimension");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)) {
  data.assign(static_cast<size_t>(numel_of(shape)), 0.0);
}

Tensor Tensor::from(std::vector<int> s, std::vector<double> d) {
  Tensor t;
  if (numel_of(s) != static_cast<std::int64_t>(d.size())) {
    throw DataError("tensor: data length does not match shape");
  }
  t.shape = std::move(s);
  t.data = std::move(d);
  return t;
}

std::string Tensor::shape_str() const {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) out << "x";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

}  // namespace tocgen::nn

#pragma once

#include <Eigen/Dense>

#include "tocgen/nn/tensor.hpp"

namespace tocgen::nn {

using EMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMatrix>;
using ECMap = Eigen::Map<const EMatrix>;
using EVecMap = Eigen::Map<Eigen::VectorXd>;
using ECVecMap = Eigen::Map<const Eigen::VectorXd>;

inline EMap mat(Tensor& t) { return EMap(t.data.data(), t.rows(), t.cols()); }
inline ECMap mat(const Tensor& t) { return ECMap(t.data.data(), t.rows(), t.cols()); }
inline EVecMap vec(Tensor& t) {
  return EVecMap(t.data.data(), static_cast<Eigen::Index>(t.data.size()));
}
inline ECVecMap vec(const Tensor& t) {
  return ECVecMap(t.data.data(), static_cast<Eigen::Index>(t.data.size()));
}

}  // namespace tocgen::nn

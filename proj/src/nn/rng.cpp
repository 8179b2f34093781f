#include "tocgen/nn/rng.hpp"

#include <cmath>

#include "eigen_util.hpp"

namespace tocgen::nn {

void init_glorot_uniform(Tensor& w, int fan_in, int fan_out, Rng& rng) {
  double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : w.data) v = rng.uniform(-limit, limit);
}

void init_orthogonal(Tensor& w, Rng& rng) {
  int rows = w.rows(), cols = w.cols();
  bool transpose = rows < cols;
  int r = transpose ? cols : rows;
  int c = transpose ? rows : cols;
  Eigen::MatrixXd a(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) a(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(r, c);
  Eigen::MatrixXd rmat = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
  for (int j = 0; j < c; ++j) {
    if (rmat(j, j) < 0) q.col(j) = -q.col(j);
  }
  if (transpose) q = q.transpose().eval();
  EMap out = mat(w);
  out = q;
}

}  // namespace tocgen::nn

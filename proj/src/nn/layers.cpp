#include "tocgen/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "eigen_util.hpp"
#include "tocgen/errors.hpp"

namespace tocgen::nn {

// ---- Embedding -------------------------------------------------------------

Embedding::Embedding(int vocab, int dim)
    : table({vocab, dim}), grad({vocab, dim}) {}

Tensor Embedding::forward(const std::vector<int>& indices) const {
  Tensor out({static_cast<int>(indices.size()), table.cols()});
  for (size_t t = 0; t < indices.size(); ++t) {
    int row = indices[t];
    if (row < 0 || row >= table.rows()) {
      throw DataError("embedding: index " + std::to_string(row) + " out of range");
    }
    std::copy_n(table.data.begin() + static_cast<size_t>(row) * table.cols(),
                table.cols(), out.data.begin() + t * table.cols());
  }
  return out;
}

void Embedding::backward(const std::vector<int>& indices, const Tensor& d_out) {
  for (size_t t = 0; t < indices.size(); ++t) {
    double* g = grad.data.data() + static_cast<size_t>(indices[t]) * table.cols();
    const double* d = d_out.data.data() + t * table.cols();
    for (int j = 0; j < table.cols(); ++j) g[j] += d[j];
  }
}

std::vector<ParamRef> Embedding::params(const std::string& prefix) {
  return {{prefix + ".table", &table, &grad}};
}

// ---- Conv1D ----------------------------------------------------------------

Conv1D::Conv1D(int in_dim_, int filters_, int width_, Rng& rng)
    : in_dim(in_dim_),
      filters(filters_),
      width(width_),
      w({width_ * in_dim_, filters_}),
      b({filters_}),
      gw({width_ * in_dim_, filters_}),
      gb({filters_}) {
  init_glorot_uniform(w, width_ * in_dim_, filters_, rng);
}

Tensor Conv1D::forward(const Tensor& x, Cache* cache) const {
  int t_in = x.rows();
  if (x.cols() != in_dim) {
    throw DataError("conv1d: input dim " + std::to_string(x.cols()) +
                    " != " + std::to_string(in_dim));
  }
  if (t_in < width) {
    throw DataError("conv1d: input length " + std::to_string(t_in) +
                    " shorter than filter width " + std::to_string(width));
  }
  int t_out = out_len(t_in);
  Tensor cols({t_out, width * in_dim});
  for (int t = 0; t < t_out; ++t) {
    std::copy_n(x.data.begin() + static_cast<size_t>(t) * in_dim,
                static_cast<size_t>(width) * in_dim,
                cols.data.begin() + static_cast<size_t>(t) * width * in_dim);
  }
  Tensor out({t_out, filters});
  mat(out).noalias() = mat(cols) * mat(w);
  mat(out).rowwise() += vec(b).transpose();
  if (cache) cache->cols = std::move(cols);
  return out;
}

Tensor Conv1D::backward(const Cache& cache, const Tensor& d_out) {
  mat(gw).noalias() += mat(cache.cols).transpose() * mat(d_out);
  vec(gb) += mat(d_out).colwise().sum();
  Tensor d_cols({cache.cols.rows(), cache.cols.cols()});
  mat(d_cols).noalias() = mat(d_out) * mat(w).transpose();
  int t_in = cache.cols.rows() + width - 1;
  Tensor d_x({t_in, in_dim});
  for (int t = 0; t < cache.cols.rows(); ++t) {
    const double* src = d_cols.data.data() + static_cast<size_t>(t) * width * in_dim;
    double* dst = d_x.data.data() + static_cast<size_t>(t) * in_dim;
    for (int k = 0; k < width * in_dim; ++k) dst[k] += src[k];
  }
  return d_x;
}

std::vector<ParamRef> Conv1D::params(const std::string& prefix) {
  return {{prefix + ".w", &w, &gw}, {prefix + ".b", &b, &gb}};
}

// ---- MaxPool1D -------------------------------------------------------------

Tensor MaxPool1D::forward(const Tensor& x, Cache* cache) const {
  int t_out = x.rows() / pool;
  int k = x.cols();
  Tensor out({std::max(t_out, 1), k});
  if (t_out == 0) {
    // degenerate input shorter than the pool window: single max row
    out = Tensor({1, k});
    t_out = 1;
    if (cache) {
      cache->argmax.assign(static_cast<size_t>(k), 0);
      cache->in_rows = x.rows();
    }
    for (int j = 0; j < k; ++j) {
      int best = 0;
      for (int t = 1; t < x.rows(); ++t) {
        if (x.at(t, j) > x.at(best, j)) best = t;
      }
      out.at(0, j) = x.at(best, j);
      if (cache) cache->argmax[static_cast<size_t>(j)] = best;
    }
    return out;
  }
  if (cache) {
    cache->argmax.assign(static_cast<size_t>(t_out) * k, 0);
    cache->in_rows = x.rows();
  }
  for (int p = 0; p < t_out; ++p) {
    for (int j = 0; j < k; ++j) {
      int best = p * pool;
      for (int t = p * pool + 1; t < (p + 1) * pool; ++t) {
        if (x.at(t, j) > x.at(best, j)) best = t;
      }
      out.at(p, j) = x.at(best, j);
      if (cache) cache->argmax[static_cast<size_t>(p) * k + j] = best;
    }
  }
  return out;
}

Tensor MaxPool1D::backward(const Cache& cache, const Tensor& d_out, int cols) const {
  Tensor d_x({cache.in_rows, cols});
  for (int p = 0; p < d_out.rows(); ++p) {
    for (int j = 0; j < cols; ++j) {
      d_x.at(cache.argmax[static_cast<size_t>(p) * cols + j], j) += d_out.at(p, j);
    }
  }
  return d_x;
}

// ---- Dense -----------------------------------------------------------------

Dense::Dense(int in, int out, Rng& rng)
    : w({in, out}), b({out}), gw({in, out}), gb({out}) {
  init_glorot_uniform(w, in, out, rng);
}

Tensor Dense::forward(const Tensor& x, Cache* cache) const {
  if (x.cols() != w.rows()) {
    throw DataError("dense: input dim " + std::to_string(x.cols()) + " != " +
                    std::to_string(w.rows()));
  }
  Tensor out({x.rows(), w.cols()});
  mat(out).noalias() = mat(x) * mat(w);
  mat(out).rowwise() += vec(b).transpose();
  if (cache) cache->x = x;
  return out;
}

Tensor Dense::backward(const Cache& cache, const Tensor& d_out) {
  mat(gw).noalias() += mat(cache.x).transpose() * mat(d_out);
  vec(gb) += mat(d_out).colwise().sum();
  Tensor d_x({cache.x.rows(), cache.x.cols()});
  mat(d_x).noalias() = mat(d_out) * mat(w).transpose();
  return d_x;
}

std::vector<ParamRef> Dense::params(const std::string& prefix) {
  return {{prefix + ".w", &w, &gw}, {prefix + ".b", &b, &gb}};
}

// ---- Activations / dropout / softmax ---------------------------------------

Tensor relu(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.data) v = v > 0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& y, const Tensor& d_out) {
  Tensor d_x = d_out;
  for (size_t i = 0; i < d_x.data.size(); ++i) {
    if (y.data[i] <= 0) d_x.data[i] = 0.0;
  }
  return d_x;
}

Tensor dropout_forward(const Tensor& x, double p, bool train, Rng* rng,
                       Tensor* mask_out) {
  if (!train || p <= 0.0) {
    if (mask_out) {
      *mask_out = x;
      std::fill(mask_out->data.begin(), mask_out->data.end(), 1.0);
    }
    return x;
  }
  double keep = 1.0 - p;
  Tensor mask = x;
  for (double& v : mask.data) v = rng->bernoulli(keep) ? 1.0 / keep : 0.0;
  Tensor y = x;
  for (size_t i = 0; i < y.data.size(); ++i) y.data[i] *= mask.data[i];
  if (mask_out) *mask_out = std::move(mask);
  return y;
}

Tensor dropout_backward(const Tensor& mask, const Tensor& d_out) {
  Tensor d_x = d_out;
  for (size_t i = 0; i < d_x.data.size(); ++i) d_x.data[i] *= mask.data[i];
  return d_x;
}

Tensor softmax_rows(const Tensor& logits) {
  Tensor out = logits;
  for (int i = 0; i < logits.rows(); ++i) {
    double mx = -1e300;
    for (int j = 0; j < logits.cols(); ++j) mx = std::max(mx, logits.at(i, j));
    double sum = 0;
    for (int j = 0; j < logits.cols(); ++j) {
      double e = std::exp(logits.at(i, j) - mx);
      out.at(i, j) = e;
      sum += e;
    }
    for (int j = 0; j < logits.cols(); ++j) out.at(i, j) /= sum;
  }
  return out;
}

double cross_entropy(const Tensor& probs_row, int label, double weight,
                     Tensor* d_logits) {
  double p = std::max(probs_row.data[static_cast<size_t>(label)], 1e-12);
  if (d_logits) {
    *d_logits = probs_row;
    d_logits->data[static_cast<size_t>(label)] -= 1.0;
    for (double& v : d_logits->data) v *= weight;
  }
  return -weight * std::log(p);
}

int conv_maxpool_out_len(int t, int filter, int pool) {
  return (t - filter + 1) / pool;
}

Tensor conv1d_maxpool(const Tensor& input, const Conv1D& conv, int pool_size) {
  MaxPool1D pooler{pool_size};
  return pooler.forward(conv.forward(input));
}

}  // namespace tocgen::nn

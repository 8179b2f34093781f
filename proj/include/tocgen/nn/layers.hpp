#pragma once

#include <vector>

#include "tocgen/nn/rng.hpp"
#include "tocgen/nn/tensor.hpp"

namespace tocgen::nn {

// Layers keep parameters and gradient accumulators; forward passes are const
// and write activations into caller-owned caches so frozen models can serve
// several threads. backward() accumulates into the gradient tensors and is
// meant for the single training thread.

struct Embedding {
  Tensor table, grad;  // V x d

  Embedding() = default;
  Embedding(int vocab, int dim);
  int dim() const { return table.cols(); }
  Tensor forward(const std::vector<int>& indices) const;  // T x d
  void backward(const std::vector<int>& indices, const Tensor& d_out);
  void zero_grad() { grad.zero(); }
  std::vector<ParamRef> params(const std::string& prefix);
};

/// Valid (no padding) 1D convolution over the time axis.
struct Conv1D {
  int in_dim = 0, filters = 0, width = 0;
  Tensor w, b, gw, gb;  // w: (width*in_dim) x filters

  struct Cache {
    Tensor cols;  // T_out x (width*in_dim)
  };

  Conv1D() = default;
  Conv1D(int in_dim, int filters, int width, Rng& rng);
  int out_len(int t) const { return t - width + 1; }
  Tensor forward(const Tensor& x, Cache* cache = nullptr) const;  // throws on T < width
  Tensor backward(const Cache& cache, const Tensor& d_out);       // returns dx
  void zero_grad() { gw.zero(); gb.zero(); }
  std::vector<ParamRef> params(const std::string& prefix);
};

/// Non-overlapping max-pool of the given width over time; trailing remainder
/// rows are dropped.
struct MaxPool1D {
  int pool = 1;

  struct Cache {
    std::vector<int> argmax;  // flattened T_out x K source row per cell
    int in_rows = 0;
  };

  Tensor forward(const Tensor& x, Cache* cache = nullptr) const;
  Tensor backward(const Cache& cache, const Tensor& d_out, int cols) const;
};

struct Dense {
  Tensor w, b, gw, gb;  // w: in x out

  struct Cache {
    Tensor x;
  };

  Dense() = default;
  Dense(int in, int out, Rng& rng);
  Tensor forward(const Tensor& x, Cache* cache = nullptr) const;  // rows x out
  Tensor backward(const Cache& cache, const Tensor& d_out);
  void zero_grad() { gw.zero(); gb.zero(); }
  std::vector<ParamRef> params(const std::string& prefix);
};

Tensor relu(const Tensor& x);
Tensor relu_backward(const Tensor& y, const Tensor& d_out);

/// Inverted dropout: scales by 1/keep at train time, identity at inference.
Tensor dropout_forward(const Tensor& x, double p, bool train, Rng* rng,
                       Tensor* mask_out);
Tensor dropout_backward(const Tensor& mask, const Tensor& d_out);

/// Numerically stable row-wise softmax.
Tensor softmax_rows(const Tensor& logits);

/// Weighted cross-entropy of one row distribution against an integer label;
/// also emits d_logits when requested.
double cross_entropy(const Tensor& probs_row, int label, double weight,
                     Tensor* d_logits);

/// Shape arithmetic helper used by the conv+pool stacks.
int conv_maxpool_out_len(int t, int filter, int pool);

/// One conv branch applied to an embedded sequence, then pooled. Matches the
/// (kernels, filter_size, pool_size) nomenclature of the model configs.
Tensor conv1d_maxpool(const Tensor& input, const Conv1D& conv, int pool_size);

}  // namespace tocgen::nn

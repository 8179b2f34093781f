#pragma once

#include <vector>

#include "tocgen/nn/layers.hpp"

namespace tocgen::nn {

/// LSTM cell, gate order [i f g o], forget-gate bias initialized to 1.
struct LstmCell {
  int in_dim = 0, units = 0;
  Tensor w, u, b;     // w: in x 4u, u: units x 4u, b: 4u
  Tensor gw, gu, gb;

  LstmCell() = default;
  LstmCell(int in_dim, int units, Rng& rng);
  void zero_grad() { gw.zero(); gu.zero(); gb.zero(); }
  std::vector<ParamRef> params(const std::string& prefix);
};

/// Per-sequence activations of one direction, kept for backpropagation
/// through time.
struct LstmTrace {
  Tensor h, c;                  // (N+1) x units, row 0 = initial state
  Tensor i, f, g, o, tanh_c;    // N x units
  Tensor x_w;                   // N x 4u, precomputed x . W
  Tensor rec_mask;              // units, recurrent dropout mask (ones at inference)
  const Tensor* input = nullptr;
};

/// Runs one direction over the sequence (already reversed for the backward
/// direction). Returns N x units hidden states.
Tensor lstm_forward(const LstmCell& cell, const Tensor& seq, double recurrent_dropout,
                    bool train, Rng* rng, LstmTrace* trace);

/// BPTT for one direction; accumulates parameter grads, returns d_seq.
Tensor lstm_backward(LstmCell& cell, const LstmTrace& trace, const Tensor& d_h);

struct BiLstm {
  LstmCell fwd, bwd;
  double recurrent_dropout = 0.0;

  struct Cache {
    LstmTrace fwd, bwd;
    Tensor reversed_input;
  };

  BiLstm() = default;
  BiLstm(int in_dim, int units, double recurrent_dropout, Rng& rng);
  int units() const { return fwd.units; }

  /// N x d -> N x 2*units (forward states then backward states per row).
  Tensor forward(const Tensor& seq, bool train = false, Rng* rng = nullptr,
                 Cache* cache = nullptr) const;
  Tensor backward(const Cache& cache, const Tensor& d_out);
  void zero_grad() { fwd.zero_grad(); bwd.zero_grad(); }
  std::vector<ParamRef> params(const std::string& prefix);
};

}  // namespace tocgen::nn

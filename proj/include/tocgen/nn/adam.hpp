#pragma once

#include <vector>

#include "tocgen/nn/tensor.hpp"

namespace tocgen::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;  // throws DataError when betas leave (0,1)
};

struct AdamState {
  long step = 0;
  std::vector<Tensor> m, v;  // parallel to the param list
};

/// Standard Adam update with bias correction. Throws DataError when a grad
/// shape does not match its parameter.
void adam_step(const std::vector<ParamRef>& params, AdamState& state,
               const AdamConfig& cfg);

}  // namespace tocgen::nn

#pragma once

#include <vector>

#include "tocgen/nn/tensor.hpp"

namespace tocgen::nn {

/// Linear-chain CRF potentials.
struct CrfParams {
  Tensor transitions;  // K x K, [from][to]
  Tensor start, end;   // K

  CrfParams() = default;
  explicit CrfParams(int num_labels);
  int num_labels() const { return start.dim(0); }
};

struct CrfGrads {
  Tensor d_emissions;    // N x K
  Tensor d_transitions;  // K x K
  Tensor d_start, d_end; // K
};

/// score(path) = start + emissions + transitions + end along the labels.
double crf_path_score(const Tensor& emissions, const std::vector<int>& labels,
                      const CrfParams& params);

/// log Z by the forward algorithm in log space.
double crf_log_partition(const Tensor& emissions, const CrfParams& params);

/// Negative log-likelihood log Z - score(path); fills grads (forward-backward
/// marginals minus observed counts) when given.
double crf_nll(const Tensor& emissions, const std::vector<int>& labels,
               const CrfParams& params, CrfGrads* grads = nullptr);

/// Best-scoring path; ties broken toward the lowest label index.
std::vector<int> crf_viterbi(const Tensor& emissions, const CrfParams& params);

}  // namespace tocgen::nn

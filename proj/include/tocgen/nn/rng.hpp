#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tocgen/nn/tensor.hpp"

namespace tocgen::nn {

/// Single seeded generator; every random draw of a training run flows
/// through one instance so runs are reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }
  std::uint64_t next() { return gen_(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(0, static_cast<int>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

void init_glorot_uniform(Tensor& w, int fan_in, int fan_out, Rng& rng);
/// Random orthogonal init (QR of a Gaussian matrix, sign-fixed).
void init_orthogonal(Tensor& w, Rng& rng);

}  // namespace tocgen::nn

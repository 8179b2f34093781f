#include "tocgen/nn/adam.hpp"

#include <cmath>

#include "tocgen/errors.hpp"

namespace tocgen::nn {

void AdamConfig::validate() const {
  if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0) {
    throw DataError("adam: betas must lie in (0, 1)");
  }
  if (learning_rate <= 0.0) throw DataError("adam: learning rate must be positive");
}

void adam_step(const std::vector<ParamRef>& params, AdamState& state,
               const AdamConfig& cfg) {
  cfg.validate();
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.value->shape);
      state.v.emplace_back(p.value->shape);
    }
  }
  if (state.m.size() != params.size()) {
    throw DataError("adam: state does not match parameter list");
  }
  ++state.step;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (size_t idx = 0; idx < params.size(); ++idx) {
    Tensor& value = *params[idx].value;
    const Tensor& grad = *params[idx].grad;
    if (!value.same_shape(grad) || !value.same_shape(state.m[idx])) {
      throw DataError("adam: shape mismatch for parameter " + params[idx].name);
    }
    Tensor& m = state.m[idx];
    Tensor& v = state.v[idx];
    for (size_t i = 0; i < value.data.size(); ++i) {
      double g = grad.data[i];
      m.data[i] = cfg.beta1 * m.data[i] + (1.0 - cfg.beta1) * g;
      v.data[i] = cfg.beta2 * v.data[i] + (1.0 - cfg.beta2) * g * g;
      double m_hat = m.data[i] / bc1;
      double v_hat = v.data[i] / bc2;
      value.data[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

}  // namespace tocgen::nn

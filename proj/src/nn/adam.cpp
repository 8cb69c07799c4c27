#include "gri/nn/adam.hpp"

#include <cmath>
#include <string>

namespace gri::nn {

AdamState make_adam(const Mlp& net, double learning_rate) {
  AdamState s;
  s.first_moment = zero_gradients(net);
  s.second_moment = zero_gradients(net);
  s.learning_rate = learning_rate;
  return s;
}

void adam_step(Mlp& net, const Gradients& grads, AdamState& state) {
  const int L = net.num_layers();
  if (static_cast<int>(grads.weights.size()) != L ||
      static_cast<int>(state.first_moment.weights.size()) != L)
    throw ValidationError("adam_step: gradient/state shape mismatch");

  for (int l = 0; l < L; ++l) {
    if (!grads.weights[l].allFinite() || !grads.biases[l].allFinite())
      throw RunAbortError("adam_step: non-finite gradient in layer " + std::to_string(l));
  }

  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);

  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = state.beta1 * m + (1.0 - state.beta1) * grad;
    v.array() = state.beta2 * v.array() + (1.0 - state.beta2) * grad.array().square();
    param.array() -=
        state.learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.epsilon);
  };

  for (int l = 0; l < L; ++l) {
    update(net.weights[l], grads.weights[l], state.first_moment.weights[l],
           state.second_moment.weights[l]);
    update(net.biases[l], grads.biases[l], state.first_moment.biases[l],
           state.second_moment.biases[l]);
  }
}

void adam_step(double& param, double grad, AdamScalarState& state) {
  if (!std::isfinite(grad)) throw RunAbortError("adam_step: non-finite scalar gradient");
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad;
  state.second_moment = state.beta2 * state.second_moment + (1.0 - state.beta2) * grad * grad;
  const double m_hat = state.first_moment / (1.0 - std::pow(state.beta1, t));
  const double v_hat = state.second_moment / (1.0 - std::pow(state.beta2, t));
  param -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
}

}  // namespace gri::nn

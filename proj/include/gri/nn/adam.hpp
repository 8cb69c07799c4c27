#pragma once

#include "gri/nn/mlp.hpp"

namespace gri::nn {

/// Adam optimizer state for one Mlp. Moments are parameter-shaped and start
/// at zero; step_count goes up by exactly one per adam_step.
struct AdamState {
  Gradients first_moment;
  Gradients second_moment;
  std::uint64_t step_count = 0;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam(const Mlp& net, double learning_rate);

/// One bias-corrected Adam update of `net` in place. Throws RunAbortError
/// naming the layer when a gradient is non-finite.
void adam_step(Mlp& net, const Gradients& grads, AdamState& state);

/// Scalar Adam (used for the SAC entropy temperature).
struct AdamScalarState {
  double first_moment = 0.0;
  double second_moment = 0.0;
  std::uint64_t step_count = 0;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

void adam_step(double& param, double grad, AdamScalarState& state);

}  // namespace gri::nn

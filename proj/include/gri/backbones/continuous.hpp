#pragma once

#include "gri/backbones/learner.hpp"
#include "gri/nn/mlp.hpp"

namespace gri::backbones {

/// Affine map between the actor's tanh output in (-1, 1)^d and the
/// environment's native action range.
struct ActionScaling {
  Vector scale;
  Vector center;

  static ActionScaling from_spec(const ActionSpec& spec);
  Vector to_native(const Vector& squashed) const {
    return center + scale.cwiseProduct(squashed);
  }
  Matrix to_native(const Matrix& squashed) const {
    return (squashed.array().colwise() * scale.array()).colwise() + center.array();
  }
};

/// Column-stacks [states; actions] as critic input.
Matrix stack_inputs(const Matrix& states, const Matrix& actions);

/// Mean squared error between Q(s, a) and y; gradients for the critic.
double critic_loss_and_grads(const nn::Mlp& critic, const Matrix& states,
                             const Matrix& native_actions, const Vector& y,
                             nn::Gradients* grads);

}  // namespace gri::backbones

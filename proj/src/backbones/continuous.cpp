#include "gri/backbones/continuous.hpp"

namespace gri::backbones {

ActionScaling ActionScaling::from_spec(const ActionSpec& spec) {
  if (spec.kind != ActionKind::Continuous)
    throw ValidationError("ActionScaling: continuous action space required");
  ActionScaling s;
  s.scale = (spec.high - spec.low) / 2.0;
  s.center = (spec.high + spec.low) / 2.0;
  return s;
}

Matrix stack_inputs(const Matrix& states, const Matrix& actions) {
  Matrix x(states.rows() + actions.rows(), states.cols());
  x.topRows(states.rows()) = states;
  x.bottomRows(actions.rows()) = actions;
  return x;
}

double critic_loss_and_grads(const nn::Mlp& critic, const Matrix& states,
                             const Matrix& native_actions, const Vector& y,
                             nn::Gradients* grads) {
  const int n = static_cast<int>(states.cols());
  nn::ForwardCache cache;
  const Matrix q = nn::forward(critic, stack_inputs(states, native_actions), &cache);
  const Vector e = q.row(0).transpose() - y;
  const double loss = e.squaredNorm() / n;
  if (grads) {
    const Matrix dq = (2.0 / n) * e.transpose();
    *grads = nn::backward(critic, cache, dq);
  }
  return loss;
}

}  // namespace gri::backbones

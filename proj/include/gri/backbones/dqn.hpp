#pragma once

#include "gri/backbones/learner.hpp"
#include "gri/nn/adam.hpp"
#include "gri/nn/mlp.hpp"

namespace gri::backbones {

/// y = r + gamma * (1 - done) * max_a' Q_target(s', a'). Exposed separately
/// so the rule can be checked against hand-computed fixtures.
Vector dqn_targets(const replay::Batch& batch, const nn::Mlp& q_target, double gamma);

/// Mean Huber loss (delta = 1) between Q(s, a) and y; gradients for q only.
double dqn_loss_and_grads(const nn::Mlp& q, const replay::Batch& batch, const Vector& y,
                          nn::Gradients* grads);

/// DQN with a hard-synced target network and linear epsilon-greedy schedule.
class DqnLearner final : public Learner {
public:
  DqnLearner(const envs::EnvSignature& signature, const LearnerConfig& config,
             std::uint64_t seed);

  const char* backbone() const override { return "dqn"; }
  UpdateStats update(const replay::Batch& batch) override;
  Action act(const Vector& observation, ActMode mode, std::uint64_t env_step,
             Rng& rng) override;
  std::shared_ptr<const PolicySnapshot> snapshot() const override;
  std::uint64_t update_count() const override { return updates_; }
  void save_checkpoints(const std::string& dir, std::uint64_t env_steps) const override;

  const nn::Mlp& q_net() const { return q_; }
  const nn::Mlp& target_net() const { return q_target_; }
  nn::Mlp& mutable_q_net() { return q_; }
  void sync_target() { q_target_ = q_; }

private:
  LearnerConfig cfg_;
  int n_actions_;
  nn::Mlp q_;
  nn::Mlp q_target_;
  nn::AdamState adam_;
  std::uint64_t updates_ = 0;
};

}  // namespace gri::backbones

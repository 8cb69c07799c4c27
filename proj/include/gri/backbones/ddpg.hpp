#pragma once

#include "gri/backbones/continuous.hpp"
#include "gri/backbones/learner.hpp"
#include "gri/nn/adam.hpp"
#include "gri/nn/mlp.hpp"

namespace gri::backbones {

/// y = r + gamma * (1 - done) * Q_target(s', actor_target(s')).
Vector ddpg_targets(const replay::Batch& batch, const nn::Mlp& actor_target,
                    const nn::Mlp& critic_target, const ActionScaling& scaling,
                    double gamma);

/// L = -mean Q(s, actor(s)); gradients for the actor, critic held fixed.
double ddpg_actor_loss_and_grads(const nn::Mlp& actor, const nn::Mlp& critic,
                                 const Matrix& states, const ActionScaling& scaling,
                                 nn::Gradients* grads);

class DdpgLearner final : public Learner {
public:
  DdpgLearner(const envs::EnvSignature& signature, const LearnerConfig& config,
              std::uint64_t seed);

  const char* backbone() const override { return "ddpg"; }
  UpdateStats update(const replay::Batch& batch) override;
  Action act(const Vector& observation, ActMode mode, std::uint64_t env_step,
             Rng& rng) override;
  std::shared_ptr<const PolicySnapshot> snapshot() const override;
  std::uint64_t update_count() const override { return updates_; }
  void save_checkpoints(const std::string& dir, std::uint64_t env_steps) const override;

  const nn::Mlp& actor() const { return actor_; }
  const nn::Mlp& critic() const { return critic_; }
  const nn::Mlp& actor_target() const { return actor_target_; }
  const nn::Mlp& critic_target() const { return critic_target_; }

private:
  LearnerConfig cfg_;
  ActionScaling scaling_;
  ActionSpec action_spec_;
  nn::Mlp actor_, critic_;
  nn::Mlp actor_target_, critic_target_;
  nn::AdamState actor_adam_, critic_adam_;
  std::uint64_t updates_ = 0;
};

}  // namespace gri::backbones

#pragma once

#include "gri/backbones/continuous.hpp"
#include "gri/backbones/learner.hpp"
#include "gri/nn/adam.hpp"
#include "gri/nn/gaussian.hpp"
#include "gri/nn/mlp.hpp"

namespace gri::backbones {

/// y = r + gamma * (1 - done) * bootstrap, the scalar TD backup every
/// backbone builds its targets from.
inline double td_target(double reward, double gamma, bool done, double bootstrap) {
  return reward + gamma * (done ? 0.0 : 1.0) * bootstrap;
}

/// SAC critic targets: bootstrap = min(Q1t, Q2t)(s', a') - alpha * logpi(a'|s')
/// with a' freshly sampled from the actor. Noise is drawn from `rng`.
Vector sac_targets(const replay::Batch& batch, const nn::Mlp& actor, const nn::Mlp& q1_target,
                   const nn::Mlp& q2_target, const ActionScaling& scaling, double alpha,
                   double gamma, Rng& rng);

/// L = mean(alpha * logpi(a~|s) - min(Q1, Q2)(s, a~)) with a~ reparametrized
/// from `noise`; gradients flow to the actor only. Returns the loss and the
/// batch-mean log-probability (consumed by the temperature update).
struct SacActorResult {
  double loss = 0.0;
  double mean_log_prob = 0.0;
};
SacActorResult sac_actor_loss_and_grads(const nn::Mlp& actor, const nn::Mlp& q1,
                                        const nn::Mlp& q2, const Matrix& states,
                                        const Matrix& noise, const ActionScaling& scaling,
                                        double alpha, nn::Gradients* grads);

/// Soft actor-critic with twin critics and optional automatic entropy
/// temperature tuned toward a target entropy of -action_dim.
class SacLearner final : public Learner {
public:
  SacLearner(const envs::EnvSignature& signature, const LearnerConfig& config,
             std::uint64_t seed);

  const char* backbone() const override { return "sac"; }
  UpdateStats update(const replay::Batch& batch) override;
  Action act(const Vector& observation, ActMode mode, std::uint64_t env_step,
             Rng& rng) override;
  std::shared_ptr<const PolicySnapshot> snapshot() const override;
  std::uint64_t update_count() const override { return updates_; }
  void save_checkpoints(const std::string& dir, std::uint64_t env_steps) const override;

  double alpha() const { return alpha_; }
  const nn::Mlp& actor() const { return actor_; }
  const nn::Mlp& q1() const { return q1_; }
  const nn::Mlp& q2() const { return q2_; }

private:
  LearnerConfig cfg_;
  ActionScaling scaling_;
  int act_dim_;
  double target_entropy_;
  nn::Mlp actor_, q1_, q2_;
  nn::Mlp q1_target_, q2_target_;
  nn::AdamState actor_adam_, q1_adam_, q2_adam_;
  nn::AdamScalarState alpha_adam_;
  double log_alpha_;
  double alpha_;
  Rng rng_;
  std::uint64_t updates_ = 0;
};

}  // namespace gri::backbones

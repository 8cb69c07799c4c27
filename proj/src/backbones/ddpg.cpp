#include "gri/backbones/ddpg.hpp"

#include "gri/nn/checkpoint.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace gri::backbones {

Vector ddpg_targets(const replay::Batch& batch, const nn::Mlp& actor_target,
                    const nn::Mlp& critic_target, const ActionScaling& scaling,
                    double gamma) {
  if (batch.action_kind != ActionKind::Continuous)
    throw ValidationError("ddpg_targets: continuous action batch required");
  const Matrix next_actions = scaling.to_native(nn::forward(actor_target, batch.next_states));
  const Matrix q_next = nn::forward(critic_target, stack_inputs(batch.next_states, next_actions));
  return batch.rewards.array() +
         gamma * (1.0 - batch.dones.array()) * q_next.row(0).transpose().array();
}

double ddpg_actor_loss_and_grads(const nn::Mlp& actor, const nn::Mlp& critic,
                                 const Matrix& states, const ActionScaling& scaling,
                                 nn::Gradients* grads) {
  const int n = static_cast<int>(states.cols());
  nn::ForwardCache actor_cache;
  const Matrix squashed = nn::forward(actor, states, &actor_cache);
  const Matrix native = scaling.to_native(squashed);

  nn::ForwardCache critic_cache;
  const Matrix q = nn::forward(critic, stack_inputs(states, native), &critic_cache);
  const double loss = -q.row(0).mean();

  if (grads) {
    // dL/dQ = -1/n; pull the critic's input gradient back onto the action rows.
    const Matrix dq = Matrix::Constant(1, n, -1.0 / n);
    Matrix critic_input_grad;
    nn::backward(critic, critic_cache, dq, &critic_input_grad);
    const Matrix d_native = critic_input_grad.bottomRows(native.rows());
    const Matrix d_squashed = d_native.array().colwise() * scaling.scale.array();
    *grads = nn::backward(actor, actor_cache, d_squashed);
  }
  return loss;
}

DdpgLearner::DdpgLearner(const envs::EnvSignature& signature, const LearnerConfig& config,
                         std::uint64_t seed)
    : cfg_(config),
      scaling_(ActionScaling::from_spec(signature.action_spec)),
      action_spec_(signature.action_spec) {
  const int act_dim = signature.action_spec.dim;
  std::vector<int> actor_sizes{signature.obs_dim};
  std::vector<int> critic_sizes{signature.obs_dim + act_dim};
  for (int h : cfg_.hidden) {
    actor_sizes.push_back(h);
    critic_sizes.push_back(h);
  }
  actor_sizes.push_back(act_dim);
  critic_sizes.push_back(1);

  Rng init = Rng::stream(seed, /*tag=*/0x646470675f696e69ULL);
  actor_ = nn::make_mlp(actor_sizes, nn::Activation::ReLU, nn::Activation::Tanh, init);
  critic_ = nn::make_mlp(critic_sizes, nn::Activation::ReLU, nn::Activation::Identity, init);
  actor_target_ = actor_;
  critic_target_ = critic_;
  actor_adam_ = nn::make_adam(actor_, cfg_.learning_rate);
  critic_adam_ = nn::make_adam(critic_, cfg_.learning_rate);
}

UpdateStats DdpgLearner::update(const replay::Batch& batch) {
  const Vector y = ddpg_targets(batch, actor_target_, critic_target_, scaling_, cfg_.gamma);

  nn::Gradients critic_grads;
  const double critic_loss =
      critic_loss_and_grads(critic_, batch.states, batch.actions, y, &critic_grads);
  if (!std::isfinite(critic_loss)) throw RunAbortError("ddpg update: non-finite critic loss");
  nn::adam_step(critic_, critic_grads, critic_adam_);

  nn::Gradients actor_grads;
  const double actor_loss =
      ddpg_actor_loss_and_grads(actor_, critic_, batch.states, scaling_, &actor_grads);
  if (!std::isfinite(actor_loss)) throw RunAbortError("ddpg update: non-finite actor loss");
  nn::adam_step(actor_, actor_grads, actor_adam_);

  nn::polyak_update(actor_target_, actor_, cfg_.tau);
  nn::polyak_update(critic_target_, critic_, cfg_.tau);
  updates_ += 1;
  return {critic_loss, actor_loss, 0.0};
}

namespace {

Action ddpg_act(const nn::Mlp& actor, const ActionScaling& scaling, const ActionSpec& spec,
                double noise_std, const Vector& obs, ActMode mode, Rng& rng) {
  Vector native = scaling.to_native(nn::forward(actor, obs));
  if (mode == ActMode::Explore) {
    for (int i = 0; i < native.size(); ++i) {
      native[i] += noise_std * scaling.scale[i] * rng.normal();
      native[i] = std::clamp(native[i], spec.low[i], spec.high[i]);
    }
  }
  return Action::continuous(std::move(native));
}

class DdpgSnapshot final : public PolicySnapshot {
public:
  DdpgSnapshot(nn::Mlp actor, ActionScaling scaling, ActionSpec spec, double noise_std)
      : actor_(std::move(actor)),
        scaling_(std::move(scaling)),
        spec_(std::move(spec)),
        noise_std_(noise_std) {}
  Action act(const Vector& obs, ActMode mode, std::uint64_t, Rng& rng) const override {
    return ddpg_act(actor_, scaling_, spec_, noise_std_, obs, mode, rng);
  }

private:
  nn::Mlp actor_;
  ActionScaling scaling_;
  ActionSpec spec_;
  double noise_std_;
};

}  // namespace

Action DdpgLearner::act(const Vector& obs, ActMode mode, std::uint64_t, Rng& rng) {
  return ddpg_act(actor_, scaling_, action_spec_, cfg_.exploration_noise_std, obs, mode, rng);
}

std::shared_ptr<const PolicySnapshot> DdpgLearner::snapshot() const {
  return std::make_shared<DdpgSnapshot>(actor_, scaling_, action_spec_,
                                        cfg_.exploration_noise_std);
}

void DdpgLearner::save_checkpoints(const std::string& dir, std::uint64_t env_steps) const {
  std::filesystem::create_directories(dir);
  nn::save_network(actor_, dir + "/actor.grnn");
  nn::save_network(critic_, dir + "/critic.grnn");
  nn::save_network(actor_target_, dir + "/actor_target.grnn");
  nn::save_network(critic_target_, dir + "/critic_target.grnn");
  std::ofstream manifest(dir + "/manifest.txt", std::ios::trunc);
  manifest << "backbone ddpg\n"
           << "env_steps " << env_steps << "\n"
           << "updates " << updates_ << "\n"
           << "network actor actor.grnn\n"
           << "network critic critic.grnn\n"
           << "network actor_target actor_target.grnn\n"
           << "network critic_target critic_target.grnn\n";
}

}  // namespace gri::backbones

#include "gri/backbones/dqn.hpp"

#include "gri/nn/checkpoint.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace gri::backbones {

double epsilon_at(std::uint64_t env_step, double start, double end,
                  std::uint64_t decay_steps) {
  if (decay_steps == 0) return end;
  const double frac =
      std::min(1.0, static_cast<double>(env_step) / static_cast<double>(decay_steps));
  return start + (end - start) * frac;
}

Vector dqn_targets(const replay::Batch& batch, const nn::Mlp& q_target, double gamma) {
  if (batch.action_kind != ActionKind::Discrete)
    throw ValidationError("dqn_targets: discrete action batch required");
  const Matrix q_next = nn::forward(q_target, batch.next_states);
  const Vector max_next = q_next.colwise().maxCoeff();
  return batch.rewards.array() + gamma * (1.0 - batch.dones.array()) * max_next.array();
}

double dqn_loss_and_grads(const nn::Mlp& q, const replay::Batch& batch, const Vector& y,
                          nn::Gradients* grads) {
  const int n = batch.size();
  nn::ForwardCache cache;
  const Matrix q_all = nn::forward(q, batch.states, &cache);

  // Huber with unit delta on the taken action's value only.
  Matrix dq = Matrix::Zero(q_all.rows(), q_all.cols());
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const int a = batch.action_indices[i];
    const double e = q_all(a, i) - y[i];
    loss += std::abs(e) <= 1.0 ? 0.5 * e * e : std::abs(e) - 0.5;
    dq(a, i) = std::clamp(e, -1.0, 1.0) / n;
  }
  loss /= n;
  if (grads) *grads = nn::backward(q, cache, dq);
  return loss;
}

DqnLearner::DqnLearner(const envs::EnvSignature& signature, const LearnerConfig& config,
                       std::uint64_t seed)
    : cfg_(config), n_actions_(signature.action_spec.count) {
  if (signature.action_spec.kind != ActionKind::Discrete)
    throw ValidationError("dqn requires a discrete action space");
  std::vector<int> sizes;
  sizes.push_back(signature.obs_dim);
  for (int h : cfg_.hidden) sizes.push_back(h);
  sizes.push_back(n_actions_);
  Rng init = Rng::stream(seed, /*tag=*/0x64716e5f696e6974ULL);
  q_ = nn::make_mlp(sizes, nn::Activation::ReLU, nn::Activation::Identity, init);
  q_target_ = q_;
  adam_ = nn::make_adam(q_, cfg_.learning_rate);
}

UpdateStats DqnLearner::update(const replay::Batch& batch) {
  const Vector y = dqn_targets(batch, q_target_, cfg_.gamma);
  nn::Gradients grads;
  const double loss = dqn_loss_and_grads(q_, batch, y, &grads);
  if (!std::isfinite(loss)) throw RunAbortError("dqn update: non-finite loss");
  nn::adam_step(q_, grads, adam_);
  updates_ += 1;
  if (cfg_.target_sync > 0 && updates_ % cfg_.target_sync == 0) q_target_ = q_;
  return {loss, 0.0, 0.0};
}

namespace {

Action dqn_act(const nn::Mlp& q, int n_actions, const LearnerConfig& cfg, const Vector& obs,
               ActMode mode, std::uint64_t env_step, Rng& rng) {
  if (mode == ActMode::Explore) {
    const double eps = epsilon_at(env_step, cfg.eps_start, cfg.eps_end, cfg.eps_decay_steps);
    if (rng.uniform() < eps)
      return Action::discrete(static_cast<int>(rng.uniform_int(n_actions)));
  }
  const Vector values = nn::forward(q, obs);
  Eigen::Index best;
  values.maxCoeff(&best);  // first maximum: ties break to the lowest index
  return Action::discrete(static_cast<int>(best));
}

class DqnSnapshot final : public PolicySnapshot {
public:
  DqnSnapshot(nn::Mlp q, int n_actions, LearnerConfig cfg)
      : q_(std::move(q)), n_actions_(n_actions), cfg_(std::move(cfg)) {}
  Action act(const Vector& obs, ActMode mode, std::uint64_t env_step,
             Rng& rng) const override {
    return dqn_act(q_, n_actions_, cfg_, obs, mode, env_step, rng);
  }

private:
  nn::Mlp q_;
  int n_actions_;
  LearnerConfig cfg_;
};

}  // namespace

Action DqnLearner::act(const Vector& obs, ActMode mode, std::uint64_t env_step, Rng& rng) {
  return dqn_act(q_, n_actions_, cfg_, obs, mode, env_step, rng);
}

std::shared_ptr<const PolicySnapshot> DqnLearner::snapshot() const {
  return std::make_shared<DqnSnapshot>(q_, n_actions_, cfg_);
}

void DqnLearner::save_checkpoints(const std::string& dir, std::uint64_t env_steps) const {
  std::filesystem::create_directories(dir);
  nn::save_network(q_, dir + "/q_net.grnn");
  nn::save_network(q_target_, dir + "/q_target.grnn");
  std::ofstream manifest(dir + "/manifest.txt", std::ios::trunc);
  manifest << "backbone dqn\n"
           << "env_steps " << env_steps << "\n"
           << "updates " << updates_ << "\n"
           << "network q_net q_net.grnn\n"
           << "network q_target q_target.grnn\n";
}

}  // namespace gri::backbones

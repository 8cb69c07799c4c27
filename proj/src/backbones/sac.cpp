#include "gri/backbones/sac.hpp"

#include "gri/nn/checkpoint.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace gri::backbones {

namespace {

struct HeadSplit {
  Matrix means;
  Matrix log_stds;        // clamped
  Matrix clamp_mask;      // 1 where the raw value was inside the clamp range
};

HeadSplit split_head_batch(const Matrix& raw) {
  const int d = static_cast<int>(raw.rows()) / 2;
  HeadSplit h;
  h.means = raw.topRows(d);
  const Matrix raw_log_std = raw.bottomRows(d);
  h.log_stds = raw_log_std.cwiseMax(nn::kLogStdMin).cwiseMin(nn::kLogStdMax);
  h.clamp_mask = ((raw_log_std.array() > nn::kLogStdMin) &&
                  (raw_log_std.array() < nn::kLogStdMax))
                     .cast<double>()
                     .matrix();
  return h;
}

}  // namespace

Vector sac_targets(const replay::Batch& batch, const nn::Mlp& actor, const nn::Mlp& q1_target,
                   const nn::Mlp& q2_target, const ActionScaling& scaling, double alpha,
                   double gamma, Rng& rng) {
  if (batch.action_kind != ActionKind::Continuous)
    throw ValidationError("sac_targets: continuous action batch required");
  const int n = batch.size();
  const int d = static_cast<int>(scaling.scale.size());

  const HeadSplit head = split_head_batch(nn::forward(actor, batch.next_states));
  const Matrix noise = rng.normal_matrix(d, n);
  const nn::GaussianBatch g = nn::gaussian_sample_batch(head.means, head.log_stds, noise);

  const Matrix next_input = stack_inputs(batch.next_states, scaling.to_native(g.actions));
  const Vector q1 = nn::forward(q1_target, next_input).row(0);
  const Vector q2 = nn::forward(q2_target, next_input).row(0);

  Vector y(n);
  for (int i = 0; i < n; ++i) {
    const double bootstrap = std::min(q1[i], q2[i]) - alpha * g.log_probs[i];
    y[i] = td_target(batch.rewards[i], gamma, batch.dones[i] != 0.0, bootstrap);
  }
  return y;
}

SacActorResult sac_actor_loss_and_grads(const nn::Mlp& actor, const nn::Mlp& q1,
                                        const nn::Mlp& q2, const Matrix& states,
                                        const Matrix& noise, const ActionScaling& scaling,
                                        double alpha, nn::Gradients* grads) {
  const int n = static_cast<int>(states.cols());

  nn::ForwardCache actor_cache;
  const Matrix raw = nn::forward(actor, states, &actor_cache);
  const HeadSplit head = split_head_batch(raw);
  const nn::GaussianBatch g = nn::gaussian_sample_batch(head.means, head.log_stds, noise);
  const Matrix native = scaling.to_native(g.actions);

  const Matrix critic_input = stack_inputs(states, native);
  nn::ForwardCache q1_cache, q2_cache;
  const Vector v1 = nn::forward(q1, critic_input, &q1_cache).row(0);
  const Vector v2 = nn::forward(q2, critic_input, &q2_cache).row(0);

  double loss = 0.0;
  for (int i = 0; i < n; ++i) loss += alpha * g.log_probs[i] - std::min(v1[i], v2[i]);
  loss /= n;
  const double mean_log_prob = g.log_probs.mean();

  if (grads) {
    // d qmin / d action flows through whichever critic is the minimum.
    Matrix dq1 = Matrix::Zero(1, n);
    Matrix dq2 = Matrix::Zero(1, n);
    for (int i = 0; i < n; ++i) (v1[i] <= v2[i] ? dq1 : dq2)(0, i) = -1.0 / n;
    Matrix ig1, ig2;
    nn::backward(q1, q1_cache, dq1, &ig1);
    nn::backward(q2, q2_cache, dq2, &ig2);
    const Matrix d_native =
        ig1.bottomRows(native.rows()) + ig2.bottomRows(native.rows());
    const Matrix d_squashed = d_native.array().colwise() * scaling.scale.array();

    // Reparametrized chain: u = mean + exp(log_std) * noise, a = tanh(u).
    //   d logpi / d u       =  2 tanh(u)
    //   d logpi / d log_std = -1  (plus the u-path via u - mean)
    const Matrix tanh_u = g.actions;
    const Matrix du = d_squashed.cwiseProduct(
                          (1.0 - tanh_u.array().square()).matrix()) +
                      (alpha / n) * 2.0 * tanh_u;
    const Matrix d_mean = du;
    const Matrix sigma_noise = g.pre_squash - head.means;  // exp(log_std) * noise
    Matrix d_log_std =
        du.cwiseProduct(sigma_noise) + Matrix::Constant(du.rows(), n, -alpha / n);
    d_log_std = d_log_std.cwiseProduct(head.clamp_mask);

    Matrix d_raw(raw.rows(), n);
    d_raw.topRows(d_mean.rows()) = d_mean;
    d_raw.bottomRows(d_log_std.rows()) = d_log_std;
    *grads = nn::backward(actor, actor_cache, d_raw);
  }
  return {loss, mean_log_prob};
}

SacLearner::SacLearner(const envs::EnvSignature& signature, const LearnerConfig& config,
                       std::uint64_t seed)
    : cfg_(config),
      scaling_(ActionScaling::from_spec(signature.action_spec)),
      act_dim_(signature.action_spec.dim),
      target_entropy_(-static_cast<double>(signature.action_spec.dim)),
      rng_(Rng::stream(seed, /*tag=*/0x7361635f75706474ULL)) {
  std::vector<int> actor_sizes{signature.obs_dim};
  std::vector<int> critic_sizes{signature.obs_dim + act_dim_};
  for (int h : cfg_.hidden) {
    actor_sizes.push_back(h);
    critic_sizes.push_back(h);
  }
  actor_sizes.push_back(2 * act_dim_);  // mean and log_std per dimension
  critic_sizes.push_back(1);

  Rng init = Rng::stream(seed, /*tag=*/0x7361635f696e6974ULL);
  actor_ = nn::make_mlp(actor_sizes, nn::Activation::ReLU, nn::Activation::Identity, init);
  q1_ = nn::make_mlp(critic_sizes, nn::Activation::ReLU, nn::Activation::Identity, init);
  q2_ = nn::make_mlp(critic_sizes, nn::Activation::ReLU, nn::Activation::Identity, init);
  q1_target_ = q1_;
  q2_target_ = q2_;
  actor_adam_ = nn::make_adam(actor_, cfg_.learning_rate);
  q1_adam_ = nn::make_adam(q1_, cfg_.learning_rate);
  q2_adam_ = nn::make_adam(q2_, cfg_.learning_rate);
  alpha_adam_.learning_rate = cfg_.learning_rate;
  alpha_ = cfg_.alpha;
  log_alpha_ = std::log(std::max(cfg_.alpha, 1e-12));
}

UpdateStats SacLearner::update(const replay::Batch& batch) {
  const Vector y =
      sac_targets(batch, actor_, q1_target_, q2_target_, scaling_, alpha_, cfg_.gamma, rng_);

  nn::Gradients g1, g2;
  const double mse1 = critic_loss_and_grads(q1_, batch.states, batch.actions, y, &g1);
  const double mse2 = critic_loss_and_grads(q2_, batch.states, batch.actions, y, &g2);
  if (!std::isfinite(mse1) || !std::isfinite(mse2))
    throw RunAbortError("sac update: non-finite critic loss");
  nn::adam_step(q1_, g1, q1_adam_);
  nn::adam_step(q2_, g2, q2_adam_);

  const Matrix noise = rng_.normal_matrix(act_dim_, batch.size());
  nn::Gradients actor_grads;
  const SacActorResult actor_result = sac_actor_loss_and_grads(
      actor_, q1_, q2_, batch.states, noise, scaling_, alpha_, &actor_grads);
  if (!std::isfinite(actor_result.loss))
    throw RunAbortError("sac update: non-finite actor loss");
  nn::adam_step(actor_, actor_grads, actor_adam_);

  if (cfg_.alpha_auto) {
    // J(log alpha) = -log_alpha * (E[logpi] + target_entropy)
    const double grad = -(actor_result.mean_log_prob + target_entropy_);
    nn::adam_step(log_alpha_, grad, alpha_adam_);
    alpha_ = std::exp(log_alpha_);
  }

  nn::polyak_update(q1_target_, q1_, cfg_.tau);
  nn::polyak_update(q2_target_, q2_, cfg_.tau);
  updates_ += 1;
  return {0.5 * (mse1 + mse2), actor_result.loss, alpha_};
}

namespace {

Action sac_act(const nn::Mlp& actor, const ActionScaling& scaling, const Vector& obs,
               ActMode mode, Rng& rng) {
  const Vector raw = nn::forward(actor, obs);
  const nn::GaussianHead head = nn::split_head(raw);
  if (mode == ActMode::Exploit)
    return Action::continuous(scaling.to_native(head.mean.array().tanh().matrix().eval()));
  const Vector noise = rng.normal_vector(static_cast<int>(head.mean.size()));
  auto [squashed, logp] = nn::gaussian_sample_and_logprob(head, noise);
  (void)logp;
  return Action::continuous(scaling.to_native(squashed));
}

class SacSnapshot final : public PolicySnapshot {
public:
  SacSnapshot(nn::Mlp actor, ActionScaling scaling)
      : actor_(std::move(actor)), scaling_(std::move(scaling)) {}
  Action act(const Vector& obs, ActMode mode, std::uint64_t, Rng& rng) const override {
    return sac_act(actor_, scaling_, obs, mode, rng);
  }

private:
  nn::Mlp actor_;
  ActionScaling scaling_;
};

}  // namespace

Action SacLearner::act(const Vector& obs, ActMode mode, std::uint64_t, Rng& rng) {
  return sac_act(actor_, scaling_, obs, mode, rng);
}

std::shared_ptr<const PolicySnapshot> SacLearner::snapshot() const {
  return std::make_shared<SacSnapshot>(actor_, scaling_);
}

void SacLearner::save_checkpoints(const std::string& dir, std::uint64_t env_steps) const {
  std::filesystem::create_directories(dir);
  nn::save_network(actor_, dir + "/actor.grnn");
  nn::save_network(q1_, dir + "/q1.grnn");
  nn::save_network(q2_, dir + "/q2.grnn");
  nn::save_network(q1_target_, dir + "/q1_target.grnn");
  nn::save_network(q2_target_, dir + "/q2_target.grnn");
  std::ofstream manifest(dir + "/manifest.txt", std::ios::trunc);
  manifest << "backbone sac\n"
           << "env_steps " << env_steps << "\n"
           << "updates " << updates_ << "\n"
           << "alpha " << alpha_ << "\n"
           << "network actor actor.grnn\n"
           << "network q1 q1.grnn\n"
           << "network q2 q2.grnn\n"
           << "network q1_target q1_target.grnn\n"
           << "network q2_target q2_target.grnn\n";
}

}  // namespace gri::backbones

#pragma once

#include "gri/envs/environment.hpp"
#include "gri/replay/batch.hpp"

#include <memory>
#include <string>
#include <vector>

namespace gri::backbones {

enum class ActMode { Explore, Exploit };

struct UpdateStats {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double alpha = 0.0;
};

/// Immutable copy of whatever a worker needs to act. Published by the
/// learner, shared read-only across actor threads.
class PolicySnapshot {
public:
  virtual ~PolicySnapshot() = default;
  virtual Action act(const Vector& observation, ActMode mode, std::uint64_t env_step,
                     Rng& rng) const = 0;
};

/// One off-policy update rule plus its parameters. Single-threaded; owns the
/// canonical parameter copy and hands out snapshots for concurrent actors.
/// Consumes replay::Batch, which carries no source information.
class Learner {
public:
  virtual ~Learner() = default;

  virtual const char* backbone() const = 0;

  /// One gradient step on a sampled batch. Throws RunAbortError when a loss
  /// goes non-finite.
  virtual UpdateStats update(const replay::Batch& batch) = 0;

  /// Acts with the current parameters (single-process mode).
  virtual Action act(const Vector& observation, ActMode mode, std::uint64_t env_step,
                     Rng& rng) = 0;

  virtual std::shared_ptr<const PolicySnapshot> snapshot() const = 0;

  virtual std::uint64_t update_count() const = 0;

  /// One file per network in the GRNN checkpoint format, plus manifest.txt
  /// listing networks and step counts.
  virtual void save_checkpoints(const std::string& dir, std::uint64_t env_steps) const = 0;
};

struct LearnerConfig {
  double gamma = 0.99;
  double learning_rate = 3e-4;
  std::vector<int> hidden = {64, 64};

  // dqn
  double eps_start = 1.0;
  double eps_end = 0.05;
  std::uint64_t eps_decay_steps = 50000;
  std::uint64_t target_sync = 1000;

  // ddpg / sac
  double tau = 0.005;
  double exploration_noise_std = 0.1;  // ddpg, relative to the action scale
  bool alpha_auto = true;              // sac
  double alpha = 0.2;                  // sac, initial (auto) or fixed value
};

/// `backbone` is one of "dqn", "ddpg", "sac"; the action-space kind must
/// match (discrete for dqn, continuous otherwise).
std::unique_ptr<Learner> make_learner(const std::string& backbone,
                                      const envs::EnvSignature& signature,
                                      const LearnerConfig& config, std::uint64_t seed);

/// Linear epsilon schedule from (start) to (end) over decay_steps.
double epsilon_at(std::uint64_t env_step, double start, double end,
                  std::uint64_t decay_steps);

}  // namespace gri::backbones

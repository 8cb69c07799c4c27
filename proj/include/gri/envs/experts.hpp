#pragma once

#include "gri/envs/environment.hpp"

#include <vector>

namespace gri::envs {

/// Scripted expert controllers, one per built-in environment. Both act on the
/// observation alone, so they can be replayed against recorded states.
class ExpertPolicy {
public:
  enum class Kind { PendulumEnergyController, PurePursuitDriver };

  /// Builds the expert matching `env_id`, using the same action layout the
  /// environment was built with.
  static ExpertPolicy for_environment(const std::string& env_id,
                                      const EnvOptions& options = {});

  Kind kind() const { return kind_; }
  const std::string& env_id() const { return env_id_; }

  Action act(const Vector& observation) const;

  // Pendulum gains.
  double balance_kp = 16.0;
  double balance_kd = 4.0;
  double energy_gain = 2.0;
  double balance_angle = 0.3;
  double balance_speed = 1.5;

private:
  ExpertPolicy(Kind kind, std::string env_id) : kind_(kind), env_id_(std::move(env_id)) {}

  Action pendulum_action(const Vector& obs) const;
  Action driver_action(const Vector& obs) const;

  Kind kind_;
  std::string env_id_;
  int n_steer_ = 27;
  int n_throttle_ = 4;
  std::vector<double> accel_table_;
};

}  // namespace gri::envs

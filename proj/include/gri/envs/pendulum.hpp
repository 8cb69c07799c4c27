#pragma once

#include "gri/envs/environment.hpp"

namespace gri::envs {

/// Torque-limited pendulum swing-up. State is (angle from upright, angular
/// velocity); observation is (cos a, sin a, w). Per-step reward is
/// -(a^2 + 0.1 w^2 + 0.001 u^2), evaluated on the state before integration,
/// so it lies in [-16.2736.., 0]. Episodes end only at the horizon.
class Pendulum final : public Environment {
public:
  static constexpr double kGravity = 10.0;
  static constexpr double kLength = 1.0;
  static constexpr double kMass = 1.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxTorque = 2.0;
  static constexpr double kMaxSpeed = 8.0;
  static constexpr int kHorizon = 200;

  Pendulum();

  const EnvSignature& signature() const override { return signature_; }
  int horizon() const override { return kHorizon; }
  Vector reset(std::uint64_t seed) override;
  StepResult step(const Action& action) override;

  // Direct state access for tests and the scripted expert's calibration.
  void set_state(double angle, double angular_velocity);
  double angle() const { return angle_; }
  double angular_velocity() const { return angular_velocity_; }

  /// Total mechanical energy of the current state (rod pivoting about one
  /// end; zero potential at the pivot height).
  double mechanical_energy() const;

  static double wrap_angle(double a);

private:
  Vector observation() const;

  EnvSignature signature_;
  double angle_ = 0.0;
  double angular_velocity_ = 0.0;
  int steps_taken_ = 0;
  bool episode_done_ = true;
};

}  // namespace gri::envs

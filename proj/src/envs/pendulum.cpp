#include "gri/envs/pendulum.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gri::envs {

namespace {
constexpr double kPi = std::numbers::pi;
}

Pendulum::Pendulum() {
  signature_.env_id = kPendulumId;
  signature_.obs_dim = 3;
  signature_.action_spec =
      ActionSpec::continuous(Vector::Constant(1, -kMaxTorque), Vector::Constant(1, kMaxTorque));
}

double Pendulum::wrap_angle(double a) {
  // remainder() maps to [-pi, pi], nearest multiple of 2*pi.
  return std::remainder(a, 2.0 * kPi);
}

Vector Pendulum::observation() const {
  Vector obs(3);
  obs << std::cos(angle_), std::sin(angle_), angular_velocity_;
  return obs;
}

Vector Pendulum::reset(std::uint64_t seed) {
  Rng rng(seed);
  angle_ = rng.uniform(-kPi, kPi);
  angular_velocity_ = rng.uniform(-1.0, 1.0);
  steps_taken_ = 0;
  episode_done_ = false;
  return observation();
}

void Pendulum::set_state(double angle, double angular_velocity) {
  angle_ = wrap_angle(angle);
  angular_velocity_ = angular_velocity;
  steps_taken_ = 0;
  episode_done_ = false;
}

StepResult Pendulum::step(const Action& action) {
  if (episode_done_) throw ValidationError("pendulum: step() on a finished episode");
  if (action.values.size() != 1)
    throw ValidationError("pendulum: expected a 1-d continuous action");
  const double torque = action.values[0];
  if (std::abs(torque) > kMaxTorque + 1e-12)
    throw ValidationError("pendulum: torque " + std::to_string(torque) +
                          " outside [-2, 2]");

  const double reward = -(angle_ * angle_ + 0.1 * angular_velocity_ * angular_velocity_ +
                          0.001 * torque * torque);

  // Semi-implicit Euler: velocity first, then position with the new velocity.
  const double accel = 3.0 * kGravity / (2.0 * kLength) * std::sin(angle_) +
                       3.0 * torque / (kMass * kLength * kLength);
  angular_velocity_ =
      std::clamp(angular_velocity_ + accel * kDt, -kMaxSpeed, kMaxSpeed);
  angle_ = wrap_angle(angle_ + angular_velocity_ * kDt);

  steps_taken_ += 1;
  episode_done_ = steps_taken_ >= kHorizon;

  return {observation(), reward, episode_done_};
}

double Pendulum::mechanical_energy() const {
  // Uniform rod about one end: I = m l^2 / 3, center of mass at l/2 above
  // the pivot when upright (angle 0).
  const double inertia = kMass * kLength * kLength / 3.0;
  const double kinetic = 0.5 * inertia * angular_velocity_ * angular_velocity_;
  const double potential = kMass * kGravity * (kLength / 2.0) * std::cos(angle_);
  return kinetic + potential;
}

}  // namespace gri::envs

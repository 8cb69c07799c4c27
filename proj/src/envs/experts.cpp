#include "gri/envs/experts.hpp"

#include "gri/envs/pendulum.hpp"
#include "gri/envs/trackdrive.hpp"

#include <cmath>

namespace gri::envs {

ExpertPolicy ExpertPolicy::for_environment(const std::string& env_id,
                                           const EnvOptions& options) {
  if (env_id == kPendulumId)
    return ExpertPolicy(Kind::PendulumEnergyController, env_id);
  if (env_id == kTrackDriveId) {
    ExpertPolicy p(Kind::PurePursuitDriver, env_id);
    // Mirror the environment's action layout so snapped indices line up.
    TrackDrive2D env(options.track_path.empty() ? Track::default_track()
                                                : Track::load(options.track_path),
                     options.n_steer, options.n_throttle);
    p.n_steer_ = env.n_steer();
    p.n_throttle_ = env.n_throttle();
    p.accel_table_ = env.accel_table();
    return p;
  }
  throw ValidationError("no expert policy for environment \"" + env_id + "\"");
}

Action ExpertPolicy::act(const Vector& observation) const {
  return kind_ == Kind::PendulumEnergyController ? pendulum_action(observation)
                                                 : driver_action(observation);
}

Action ExpertPolicy::pendulum_action(const Vector& obs) const {
  if (obs.size() != 3) throw ValidationError("pendulum expert: expected 3-d observation");
  const double angle = std::atan2(obs[1], obs[0]);
  const double omega = obs[2];

  double torque;
  if (std::abs(angle) < balance_angle && std::abs(omega) < balance_speed) {
    // Linear balance about the top; zero at the upright rest state.
    torque = -balance_kp * angle - balance_kd * omega;
  } else {
    // Energy pump: dE/dt = u*omega, so push along omega while below the
    // upright-rest energy E* = m g l/2 = 5.
    const double energy =
        omega * omega / 6.0 + 5.0 * std::cos(angle);  // m=1, l=1, g=10
    const double target_energy = 5.0;
    const double direction = omega >= 0.0 ? 1.0 : -1.0;
    torque = energy_gain * (target_energy - energy) * direction;
  }
  torque = std::clamp(torque, -Pendulum::kMaxTorque, Pendulum::kMaxTorque);
  return Action::continuous(Vector::Constant(1, torque));
}

Action ExpertPolicy::driver_action(const Vector& obs) const {
  if (obs.size() != 6) throw ValidationError("driving expert: expected 6-d observation");
  const double speed = obs[3] * TrackDrive2D::kMaxSpeed;
  const double sin_alpha = obs[4];

  // Pure pursuit: curvature 2 sin(alpha) / L_d, converted to the [-1, 1]
  // steering command via curvature = steer / wheelbase.
  const double steer_cont = std::clamp(
      2.0 * sin_alpha / TrackDrive2D::kLookahead * TrackDrive2D::kWheelbase, -1.0, 1.0);
  // Bang-bang toward the target speed: full throttle below it, coast otherwise.
  const double accel_cont = speed < TrackDrive2D::kTargetSpeed ? 4.0 : 0.0;

  const int steer_idx = nearest_grid_index(steer_cont, -1.0, 1.0, n_steer_);
  const int throttle_idx = nearest_table_index(accel_cont, accel_table_);
  return Action::discrete(steer_idx * n_throttle_ + throttle_idx);
}

}  // namespace gri::envs

#pragma once

#include "gri/envs/environment.hpp"

#include <vector>

namespace gri::envs {

/// Closed centerline polyline with a constant lane half-width. The last
/// waypoint connects back to the first.
class Track {
public:
  Track(std::vector<Eigen::Vector2d> waypoints, double half_width);

  /// Built-in default: a rounded rectangle with 8 waypoint segments.
  static Track default_track();

  /// Plain-text file, header "halfwidth <meters>" then one "x y" per line.
  static Track load(const std::string& path);
  void save(const std::string& path) const;

  struct Projection {
    int segment = 0;
    double arc_length = 0.0;  // along-track position of the projected point
    double lateral = 0.0;     // signed offset, positive = left of travel
    double tangent = 0.0;     // direction angle of the nearest segment
  };

  Projection project(const Eigen::Vector2d& position) const;

  /// Centerline point at arc length s (wrapped around the loop).
  Eigen::Vector2d point_at(double s) const;

  int waypoint_count() const { return static_cast<int>(waypoints_.size()); }
  const Eigen::Vector2d& waypoint(int i) const { return waypoints_[i]; }
  double tangent_at_waypoint(int i) const;
  double half_width() const { return half_width_; }
  double total_length() const { return cumulative_.back(); }

private:
  std::vector<Eigen::Vector2d> waypoints_;
  std::vector<double> cumulative_;  // cumulativeـ[i] = arc length at waypoint i
  double half_width_;
};

/// Discrete-action lane-keeping task on a closed track: a kinematic bicycle
/// with n_steer evenly spaced steering values in [-1, 1] crossed with
/// n_throttle acceleration values. The per-step reward is
///   max(0, 1 - |lateral|/half_width) * max(0, cos(heading error))
///     * min(speed / v_target, 1)
/// evaluated after the motion update, so it lies in [0, 1]. Leaving the lane
/// ends the episode with reward 0.
class TrackDrive2D final : public Environment {
public:
  static constexpr double kDt = 0.1;
  static constexpr int kHorizon = 1000;
  static constexpr double kWheelbase = 2.5;
  static constexpr double kMaxSpeed = 10.0;
  static constexpr double kTargetSpeed = 5.0;
  static constexpr double kLookahead = 4.0;

  TrackDrive2D(Track track, int n_steer = 27, int n_throttle = 4);

  const EnvSignature& signature() const override { return signature_; }
  int horizon() const override { return kHorizon; }
  Vector reset(std::uint64_t seed) override;
  StepResult step(const Action& action) override;

  int n_steer() const { return n_steer_; }
  int n_throttle() const { return n_throttle_; }
  double steer_value(int steer_idx) const;
  double accel_value(int throttle_idx) const { return accel_table_[throttle_idx]; }
  const std::vector<double>& accel_table() const { return accel_table_; }
  const Track& track() const { return track_; }

  int compose_action(int steer_idx, int throttle_idx) const;
  std::pair<int, int> decompose_action(int action_index) const;

  // Pose access for tests.
  void set_pose(double x, double y, double heading, double speed);
  double x() const { return x_; }
  double y() const { return y_; }
  double heading() const { return heading_; }
  double speed() const { return speed_; }

private:
  Vector observation() const;

  Track track_;
  int n_steer_;
  int n_throttle_;
  std::vector<double> accel_table_;
  EnvSignature signature_;

  double x_ = 0.0, y_ = 0.0, heading_ = 0.0, speed_ = 0.0;
  int steps_taken_ = 0;
  bool episode_done_ = true;
};

/// Nearest value index on a uniform grid over [lo, hi] with n points;
/// ties resolve to the lower index.
int nearest_grid_index(double value, double lo, double hi, int n);

/// Nearest entry in an arbitrary sorted table; ties resolve to the lower index.
int nearest_table_index(double value, const std::vector<double>& table);

}  // namespace gri::envs

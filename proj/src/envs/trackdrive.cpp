#include "gri/envs/trackdrive.hpp"

#include "gri/envs/pendulum.hpp"  // wrap_angle

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace gri::envs {

namespace {
double wrap(double a) { return Pendulum::wrap_angle(a); }
}  // namespace

Track::Track(std::vector<Eigen::Vector2d> waypoints, double half_width)
    : waypoints_(std::move(waypoints)), half_width_(half_width) {
  if (waypoints_.size() < 3) throw ValidationError("track needs at least 3 waypoints");
  if (half_width_ <= 0.0) throw ValidationError("track half-width must be positive");
  cumulative_.resize(waypoints_.size() + 1);
  cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < waypoints_.size(); ++i) {
    const auto& a = waypoints_[i];
    const auto& b = waypoints_[(i + 1) % waypoints_.size()];
    const double len = (b - a).norm();
    if (len < 1e-9) throw ValidationError("track has coincident consecutive waypoints");
    cumulative_[i + 1] = cumulative_[i] + len;
  }
}

Track Track::default_track() {
  // Rounded rectangle: 40 x 24 m outline with 6 m corner cuts, 8 segments,
  // traversed counterclockwise.
  std::vector<Eigen::Vector2d> wps = {
      {20.0, 6.0},  {14.0, 12.0},  {-14.0, 12.0},  {-20.0, 6.0},
      {-20.0, -6.0}, {-14.0, -12.0}, {14.0, -12.0}, {20.0, -6.0},
  };
  return Track(std::move(wps), 2.0);
}

Track Track::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open track file: " + path);
  std::string line;
  double half_width = 0.0;
  bool have_header = false;
  std::vector<Eigen::Vector2d> wps;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    if (!have_header) {
      std::string tag;
      ss >> tag >> half_width;
      if (tag != "halfwidth" || ss.fail())
        throw ValidationError(path + ": first line must be \"halfwidth <meters>\"");
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    double x, y;
    ss >> x >> y;
    if (ss.fail())
      throw ValidationError(path + ": line " + std::to_string(line_no) +
                            ": expected \"x y\"");
    wps.emplace_back(x, y);
  }
  if (!have_header) throw ValidationError(path + ": empty track file");
  return Track(std::move(wps), half_width);
}

void Track::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "halfwidth " << half_width_ << "\n";
  for (const auto& wp : waypoints_) out << wp.x() << " " << wp.y() << "\n";
}

Track::Projection Track::project(const Eigen::Vector2d& position) const {
  Projection best;
  double best_dist2 = std::numeric_limits<double>::infinity();
  const int n = waypoint_count();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = waypoints_[i];
    const Eigen::Vector2d& b = waypoints_[(i + 1) % n];
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = (position - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const Eigen::Vector2d closest = a + t * ab;
    const double dist2 = (position - closest).squaredNorm();
    if (dist2 < best_dist2) {
      best_dist2 = dist2;
      const Eigen::Vector2d dir = ab.normalized();
      const Eigen::Vector2d off = position - closest;
      best.segment = i;
      best.arc_length = cumulative_[i] + t * std::sqrt(len2);
      best.lateral = dir.x() * off.y() - dir.y() * off.x();  // cross product z
      best.tangent = std::atan2(dir.y(), dir.x());
    }
  }
  return best;
}

Eigen::Vector2d Track::point_at(double s) const {
  const double total = total_length();
  s = std::fmod(s, total);
  if (s < 0.0) s += total;
  const int n = waypoint_count();
  for (int i = 0; i < n; ++i) {
    if (s <= cumulative_[i + 1] || i == n - 1) {
      const Eigen::Vector2d& a = waypoints_[i];
      const Eigen::Vector2d& b = waypoints_[(i + 1) % n];
      const double seg_len = cumulative_[i + 1] - cumulative_[i];
      const double t = (s - cumulative_[i]) / seg_len;
      return a + t * (b - a);
    }
  }
  return waypoints_[0];
}

double Track::tangent_at_waypoint(int i) const {
  const Eigen::Vector2d d =
      (waypoints_[(i + 1) % waypoint_count()] - waypoints_[i]).normalized();
  return std::atan2(d.y(), d.x());
}

int nearest_grid_index(double value, double lo, double hi, int n) {
  const double pos = (value - lo) / (hi - lo) * (n - 1);
  // ceil(pos - 0.5) rounds to nearest with exact ties going to the lower index
  int idx = static_cast<int>(std::ceil(pos - 0.5));
  return std::clamp(idx, 0, n - 1);
}

int nearest_table_index(double value, const std::vector<double>& table) {
  int best = 0;
  double best_dist = std::abs(value - table[0]);
  for (int i = 1; i < static_cast<int>(table.size()); ++i) {
    const double d = std::abs(value - table[i]);
    if (d < best_dist) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

TrackDrive2D::TrackDrive2D(Track track, int n_steer, int n_throttle)
    : track_(std::move(track)), n_steer_(n_steer), n_throttle_(n_throttle) {
  if (n_steer_ < 2) throw ValidationError("trackdrive: n_steer must be >= 2");
  if (n_throttle_ < 2) throw ValidationError("trackdrive: n_throttle must be >= 2");
  // Brake first, then 0..+4 evenly spaced; the 4-value default is (-6, 0, +2, +4).
  accel_table_.push_back(-6.0);
  for (int i = 0; i + 1 < n_throttle_; ++i)
    accel_table_.push_back(4.0 * i / std::max(1, n_throttle_ - 2));
  signature_.env_id = kTrackDriveId;
  signature_.obs_dim = 6;
  signature_.action_spec = ActionSpec::discrete(n_steer_ * n_throttle_);
}

double TrackDrive2D::steer_value(int steer_idx) const {
  return -1.0 + 2.0 * steer_idx / (n_steer_ - 1);
}

int TrackDrive2D::compose_action(int steer_idx, int throttle_idx) const {
  return steer_idx * n_throttle_ + throttle_idx;
}

std::pair<int, int> TrackDrive2D::decompose_action(int action_index) const {
  return {action_index / n_throttle_, action_index % n_throttle_};
}

Vector TrackDrive2D::observation() const {
  const auto proj = track_.project({x_, y_});
  const double heading_err = wrap(heading_ - proj.tangent);
  const Eigen::Vector2d ahead = track_.point_at(proj.arc_length + kLookahead);
  const double bearing = std::atan2(ahead.y() - y_, ahead.x() - x_);
  const double alpha = wrap(bearing - heading_);
  Vector obs(6);
  obs << proj.lateral / track_.half_width(), std::sin(heading_err), std::cos(heading_err),
      speed_ / kMaxSpeed, std::sin(alpha), std::cos(alpha);
  return obs;
}

Vector TrackDrive2D::reset(std::uint64_t seed) {
  Rng rng(seed);
  const int wp = static_cast<int>(rng.uniform_int(track_.waypoint_count()));
  x_ = track_.waypoint(wp).x();
  y_ = track_.waypoint(wp).y();
  heading_ = track_.tangent_at_waypoint(wp);
  speed_ = 0.0;
  steps_taken_ = 0;
  episode_done_ = false;
  return observation();
}

void TrackDrive2D::set_pose(double x, double y, double heading, double speed) {
  x_ = x;
  y_ = y;
  heading_ = heading;
  speed_ = speed;
  steps_taken_ = 0;
  episode_done_ = false;
}

StepResult TrackDrive2D::step(const Action& action) {
  if (episode_done_) throw ValidationError("trackdrive: step() on a finished episode");
  const int total = n_steer_ * n_throttle_;
  if (action.index < 0 || action.index >= total)
    throw ValidationError("trackdrive: action index " + std::to_string(action.index) +
                          " outside [0, " + std::to_string(total) + ")");
  const auto [steer_idx, throttle_idx] = decompose_action(action.index);
  const double steer = steer_value(steer_idx);
  const double accel = accel_table_[throttle_idx];

  // Kinematic bicycle, velocity-first: heading turns with the old speed,
  // position advances with the new heading and new speed.
  heading_ = wrap(heading_ + speed_ * steer / kWheelbase * kDt);
  speed_ = std::clamp(speed_ + accel * kDt, 0.0, kMaxSpeed);
  x_ += speed_ * std::cos(heading_) * kDt;
  y_ += speed_ * std::sin(heading_) * kDt;

  steps_taken_ += 1;

  const auto proj = track_.project({x_, y_});
  if (std::abs(proj.lateral) > track_.half_width()) {
    episode_done_ = true;
    return {observation(), 0.0, true};
  }

  const double heading_err = wrap(heading_ - proj.tangent);
  const double lane_factor = std::max(0.0, 1.0 - std::abs(proj.lateral) / track_.half_width());
  const double heading_factor = std::max(0.0, std::cos(heading_err));
  const double speed_factor = std::min(speed_ / kTargetSpeed, 1.0);
  const double reward = lane_factor * heading_factor * speed_factor;

  episode_done_ = steps_taken_ >= kHorizon;
  return {observation(), reward, episode_done_};
}

std::unique_ptr<Environment> make_environment(const std::string& env_id,
                                              const EnvOptions& options) {
  if (env_id == kPendulumId) return std::make_unique<Pendulum>();
  if (env_id == kTrackDriveId) {
    Track track =
        options.track_path.empty() ? Track::default_track() : Track::load(options.track_path);
    return std::make_unique<TrackDrive2D>(std::move(track), options.n_steer,
                                          options.n_throttle);
  }
  throw ValidationError("unknown environment id \"" + env_id + "\" (known: " +
                        std::string(kPendulumId) + ", " + kTrackDriveId + ")");
}

}  // namespace gri::envs

#include "gri/envs/environment.hpp"
#include "gri/envs/experts.hpp"
#include "gri/envs/pendulum.hpp"
#include "gri/envs/trackdrive.hpp"

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace gri;
using namespace gri::envs;

namespace {
constexpr double kPi = std::numbers::pi;

double run_expert_episode(Environment& env, const ExpertPolicy& expert, std::uint64_t seed,
                          int* steps = nullptr) {
  Vector obs = env.reset(seed);
  double ret = 0.0;
  int n = 0;
  bool done = false;
  while (!done) {
    auto r = env.step(expert.act(obs));
    ret += r.reward;
    obs = r.observation;
    done = r.done;
    ++n;
  }
  if (steps) *steps = n;
  return ret;
}

}  // namespace

TEST_CASE("reset: deterministic per seed") {
  for (const char* id : {kPendulumId, kTrackDriveId}) {
    auto env1 = make_environment(id);
    auto env2 = make_environment(id);
    const Vector a = env1->reset(1234);
    const Vector b = env2->reset(1234);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.size() == env1->signature().obs_dim);
  }
}

TEST_CASE("reset: trackdrive spawns centered with zero lateral deviation") {
  auto env = make_environment(kTrackDriveId);
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const Vector obs = env->reset(seed);
    CHECK(obs[0] == doctest::Approx(0.0).epsilon(1e-12));  // lateral / half_width
    CHECK(obs[3] == doctest::Approx(0.0));                 // speed
  }
}

TEST_CASE("reset: pendulum angles are centered over many seeds") {
  Pendulum env;
  double mean = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    env.reset(static_cast<std::uint64_t>(i));
    mean += env.angle();
  }
  mean /= n;
  CHECK(std::abs(mean) < 0.1);
}

TEST_CASE("pendulum: upright equilibrium is a fixed point with zero reward") {
  Pendulum env;
  env.set_state(0.0, 0.0);
  auto r = env.step(Action::continuous(Vector::Zero(1)));
  CHECK(r.reward == 0.0);
  CHECK(env.angle() == 0.0);
  CHECK(env.angular_velocity() == 0.0);
}

TEST_CASE("pendulum: one step from (pi/2, 0) matches the dynamics formulas") {
  Pendulum env;
  env.set_state(kPi / 2.0, 0.0);
  auto r = env.step(Action::continuous(Vector::Zero(1)));
  // omega' = 15 * sin(pi/2) * 0.05 = 0.75; angle' = pi/2 + 0.75 * 0.05
  CHECK(env.angular_velocity() == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(env.angle() == doctest::Approx(kPi / 2.0 + 0.0375).epsilon(1e-14));
  CHECK(r.reward == doctest::Approx(-(kPi / 2.0) * (kPi / 2.0)).epsilon(1e-14));
  CHECK(r.reward == doctest::Approx(-2.4674).epsilon(1e-4));
}

TEST_CASE("pendulum: torque outside [-2, 2] is rejected") {
  Pendulum env;
  env.reset(0);
  CHECK_THROWS_AS(env.step(Action::continuous(Vector::Constant(1, 2.5))), ValidationError);
}

TEST_CASE("pendulum: reward stays in [-16.2736.., 0] under random play") {
  Pendulum env;
  Rng rng(5);
  const double lower = -(kPi * kPi + 0.1 * 64.0 + 0.001 * 4.0);
  for (int ep = 0; ep < 3; ++ep) {
    env.reset(ep);
    for (int t = 0; t < Pendulum::kHorizon; ++t) {
      auto r = env.step(Action::continuous(Vector::Constant(1, rng.uniform(-2.0, 2.0))));
      CHECK(r.reward <= 0.0);
      CHECK(r.reward >= lower - 1e-12);
    }
  }
}

TEST_CASE("pendulum: episodes end exactly at the horizon") {
  Pendulum env;
  env.reset(3);
  for (int t = 0; t < Pendulum::kHorizon - 1; ++t)
    CHECK_FALSE(env.step(Action::continuous(Vector::Zero(1))).done);
  CHECK(env.step(Action::continuous(Vector::Zero(1))).done);
  CHECK_THROWS_AS(env.step(Action::continuous(Vector::Zero(1))), ValidationError);
}

TEST_CASE("pendulum: torque-free energy drift is bounded by O(dt^2) per step") {
  Pendulum env;
  env.set_state(2.5, 0.0);  // low-energy swing, no velocity clamping
  double max_drift = 0.0;
  double prev = env.mechanical_energy();
  for (int t = 0; t < Pendulum::kHorizon; ++t) {
    env.step(Action::continuous(Vector::Zero(1)));
    const double e = env.mechanical_energy();
    max_drift = std::max(max_drift, std::abs(e - prev));
    prev = e;
  }
  // Semi-implicit Euler: per-step energy error of order dt^2 times the force
  // scale (~ m g l omega^2 terms, O(10) here).
  CHECK(max_drift < 30.0 * Pendulum::kDt * Pendulum::kDt);
}

TEST_CASE("trackdrive: stationary car with brake stays put and earns zero") {
  TrackDrive2D env(Track::default_track());
  env.reset(0);
  auto r = env.step(Action::discrete(env.compose_action(13, 0)));
  CHECK(env.speed() == 0.0);
  CHECK(r.reward == 0.0);
  CHECK_FALSE(r.done);
}

TEST_CASE("trackdrive: action index round-trip covers all 108 defaults") {
  TrackDrive2D env(Track::default_track());
  CHECK(env.signature().action_spec.count == 108);
  for (int i = 0; i < env.n_steer(); ++i)
    for (int j = 0; j < env.n_throttle(); ++j) {
      const auto [si, tj] = env.decompose_action(env.compose_action(i, j));
      CHECK(si == i);
      CHECK(tj == j);
    }
}

TEST_CASE("trackdrive: default accel table is (-6, 0, +2, +4)") {
  TrackDrive2D env(Track::default_track());
  CHECK(env.accel_value(0) == -6.0);
  CHECK(env.accel_value(1) == 0.0);
  CHECK(env.accel_value(2) == 2.0);
  CHECK(env.accel_value(3) == 4.0);
}

TEST_CASE("trackdrive: rewards stay in [0, 1]; leaving the lane ends at 0") {
  TrackDrive2D env(Track::default_track());
  Rng rng(17);
  for (int ep = 0; ep < 4; ++ep) {
    Vector obs = env.reset(ep);
    bool done = false;
    double last_reward = -1.0;
    int steps = 0;
    while (!done && steps < TrackDrive2D::kHorizon) {
      auto r = env.step(Action::discrete(static_cast<int>(rng.uniform_int(108))));
      CHECK(r.reward >= 0.0);
      CHECK(r.reward <= 1.0);
      last_reward = r.reward;
      done = r.done;
      ++steps;
    }
    if (done && steps < TrackDrive2D::kHorizon) CHECK(last_reward == 0.0);
  }
}

TEST_CASE("trackdrive: invalid action index is rejected") {
  TrackDrive2D env(Track::default_track());
  env.reset(0);
  CHECK_THROWS_AS(env.step(Action::discrete(108)), ValidationError);
  CHECK_THROWS_AS(env.step(Action::discrete(-1)), ValidationError);
}

TEST_CASE("track: file round-trip preserves geometry") {
  const Track track = Track::default_track();
  const std::string path =
      (std::filesystem::temp_directory_path() / "track_roundtrip.txt").string();
  track.save(path);
  const Track loaded = Track::load(path);
  CHECK(loaded.waypoint_count() == track.waypoint_count());
  CHECK(loaded.half_width() == doctest::Approx(track.half_width()));
  for (int i = 0; i < track.waypoint_count(); ++i)
    CHECK((loaded.waypoint(i) - track.waypoint(i)).norm() < 1e-9);
  std::remove(path.c_str());
}

TEST_CASE("track: malformed files are rejected") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "track_bad.txt").string();
  std::ofstream(path) << "width 2\n0 0\n10 0\n10 10\n";
  CHECK_THROWS_AS(Track::load(path), ValidationError);
  std::remove(path.c_str());
}

TEST_CASE("nearest grid snapping: exact middle, near-full, and tie cases") {
  // 27 steering values spaced 2/26 apart; 0.99 is nearer to 1.0 than to grid 25.
  CHECK(nearest_grid_index(0.0, -1.0, 1.0, 27) == 13);
  CHECK(nearest_grid_index(0.99, -1.0, 1.0, 27) == 26);
  const double grid12 = -1.0 + 2.0 * 12 / 26;
  const double grid13 = -1.0 + 2.0 * 13 / 26;
  CHECK(nearest_grid_index((grid12 + grid13) / 2.0, -1.0, 1.0, 27) == 12);  // tie -> lower
  CHECK(nearest_grid_index(-3.0, -1.0, 1.0, 27) == 0);
  CHECK(nearest_grid_index(3.0, -1.0, 1.0, 27) == 26);
}

TEST_CASE("expert: pendulum upright at rest commands zero torque") {
  auto expert = ExpertPolicy::for_environment(kPendulumId);
  Vector obs(3);
  obs << 1.0, 0.0, 0.0;
  CHECK(expert.act(obs).values[0] == 0.0);
}

TEST_CASE("expert: centered at target speed on a straight maps to (13, coast)") {
  TrackDrive2D env(Track::default_track());
  // Mid-point of the bottom straight, heading along +x, at the target speed.
  env.set_pose(0.0, -12.0, 0.0, TrackDrive2D::kTargetSpeed);
  auto expert = ExpertPolicy::for_environment(kTrackDriveId);
  auto rs = env.step(Action::discrete(env.compose_action(13, 1)));  // probe observation
  (void)rs;
  env.set_pose(0.0, -12.0, 0.0, TrackDrive2D::kTargetSpeed);
  Vector obs(6);
  obs << 0.0, 0.0, 1.0, 0.5, 0.0, 1.0;  // centered, aligned, speed 5, lookahead dead ahead
  const Action a = expert.act(obs);
  const auto [steer_idx, throttle_idx] = env.decompose_action(a.index);
  CHECK(steer_idx == 13);
  CHECK(throttle_idx == 1);
}

TEST_CASE("expert: pendulum mean return over 100 seeded episodes") {
  Pendulum env;
  auto expert = ExpertPolicy::for_environment(kPendulumId);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    total += run_expert_episode(env, expert, seed);
  const double mean_return = total / 100.0;
  MESSAGE("pendulum expert mean return: " << mean_return);
  CHECK(mean_return >= -250.0);
}

TEST_CASE("expert: driving expert finishes at least 95 of 100 episodes") {
  TrackDrive2D env(Track::default_track());
  auto expert = ExpertPolicy::for_environment(kTrackDriveId);
  int completed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    int steps = 0;
    run_expert_episode(env, expert, seed, &steps);
    if (steps == TrackDrive2D::kHorizon) ++completed;
  }
  MESSAGE("driving expert completed episodes: " << completed);
  CHECK(completed >= 95);
}

#pragma once

#include "gri/common.hpp"

#include <memory>
#include <string>

namespace gri::envs {

struct StepResult {
  Vector observation;
  double reward = 0.0;
  bool done = false;
};

/// Identity of an environment as far as data files and buffers care:
/// enough to validate that transitions, datasets, and configs line up.
struct EnvSignature {
  std::string env_id;
  int obs_dim = 0;
  ActionSpec action_spec;

  bool operator==(const EnvSignature&) const = default;
};

/// Episodic environment. One instance is owned by exactly one actor;
/// parallelism happens across instances, never within one.
class Environment {
public:
  virtual ~Environment() = default;

  virtual const EnvSignature& signature() const = 0;
  virtual int horizon() const = 0;

  /// Starts a new episode; deterministic per seed.
  virtual Vector reset(std::uint64_t seed) = 0;

  /// Advances one step. Throws if the episode already ended or the action
  /// is invalid for this environment's ActionSpec.
  virtual StepResult step(const Action& action) = 0;
};

inline constexpr const char* kPendulumId = "pendulum-v0";
inline constexpr const char* kTrackDriveId = "trackdrive-v0";

struct EnvOptions {
  std::string track_path;  // trackdrive: optional track file, default built-in
  int n_steer = 27;
  int n_throttle = 4;
};

std::unique_ptr<Environment> make_environment(const std::string& env_id,
                                              const EnvOptions& options = {});

}  // namespace gri::envs

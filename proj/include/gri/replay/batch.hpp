#pragma once

#include "gri/common.hpp"

#include <Eigen/Core>

namespace gri::replay {

/// Learner-facing sample batch, struct-of-arrays with one column per entry.
/// Deliberately has no source field: update math cannot distinguish
/// demonstration from exploration data.
struct Batch {
  Matrix states;        // obs_dim x n
  Matrix next_states;   // obs_dim x n
  Matrix actions;       // act_dim x n (continuous action spaces)
  Eigen::VectorXi action_indices;  // n (discrete action spaces)
  Vector rewards;       // n
  Vector dones;         // n, 0.0 or 1.0
  ActionKind action_kind = ActionKind::Discrete;

  int size() const { return static_cast<int>(rewards.size()); }
};

}  // namespace gri::replay

#pragma once

#include "gri/envs/environment.hpp"
#include "gri/envs/experts.hpp"

#include <string>
#include <vector>

namespace gri::demodata {

/// One expert step with its true environment reward. Demonstration rewards
/// are replaced only when the data is streamed into a buffer, never here.
struct DemoTransition {
  Vector state;
  Action action;
  double env_reward = 0.0;
  Vector next_state;
  bool done = false;
};

using DemoEpisode = std::vector<DemoTransition>;

/// Ordered expert episodes plus the metadata needed to validate them against
/// an environment and to resolve a DatasetMax demonstration reward.
struct DemoDataset {
  std::string env_id;
  ActionSpec action_spec;
  int obs_dim = 0;
  std::vector<DemoEpisode> episodes;
  double observed_max_step_reward = 0.0;

  std::size_t transition_count() const;

  /// Recomputes observed_max_step_reward from the stored transitions.
  void refresh_max_reward();

  /// Mean over episodes of the summed true environment rewards. This is the
  /// "expert level" line drawn by the plot command.
  double mean_episode_return() const;
};

/// Runs seeded expert episodes until at least `n_transitions` are stored.
/// Whole episodes only, so the result may overshoot. Deterministic per seed.
DemoDataset record(envs::Environment& env, const envs::ExpertPolicy& expert,
                   std::size_t n_transitions, std::uint64_t seed);

/// Binary dataset file, magic "GRID". load(save(x)) is bit-exact.
void save(const DemoDataset& dataset, const std::string& path);
DemoDataset load(const std::string& path);

/// Returns a copy in which a seeded uniformly chosen floor(fraction * N)
/// subset of transitions has its action replaced by a different uniformly
/// random valid action. Everything except those actions is unchanged.
DemoDataset corrupt(const DemoDataset& dataset, double fraction, std::uint64_t seed);

}  // namespace gri::demodata

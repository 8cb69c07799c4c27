#pragma once

#include "gri/demodata/dataset.hpp"
#include "gri/replay/transition.hpp"

#include <memory>
#include <mutex>
#include <vector>

namespace gri::demodata {

/// How the constant demonstration reward is chosen: an explicit value, or
/// the maximum per-step reward observed anywhere in the dataset.
struct RdemoPolicy {
  enum class Mode { Fixed, DatasetMax };
  Mode mode = Mode::Fixed;
  double value = 1.0;

  static RdemoPolicy fixed(double v) { return {Mode::Fixed, v}; }
  static RdemoPolicy dataset_max() { return {Mode::DatasetMax, 0.0}; }

  /// Errors on a non-finite fixed value or an empty dataset.
  double resolve(const DemoDataset& dataset) const;
};

/// Endless episode stream over a dataset: every emitted transition carries
/// the resolved r_demo and the Demonstration source tag; transitions keep
/// their in-episode order, and the episode order is reshuffled (seeded) at
/// the start of each cycle. Safe to share between demo workers.
class DemoStream {
public:
  DemoStream(std::shared_ptr<const DemoDataset> dataset, RdemoPolicy policy,
             std::uint64_t seed);

  std::vector<replay::Transition> next_episode();

  double r_demo() const { return r_demo_; }
  std::uint64_t episodes_emitted() const;
  const DemoDataset& dataset() const { return *dataset_; }

private:
  void reshuffle_locked();

  std::shared_ptr<const DemoDataset> dataset_;
  double r_demo_;
  mutable std::mutex mutex_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::uint64_t emitted_ = 0;
};

}  // namespace gri::demodata

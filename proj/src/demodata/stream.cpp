#include "gri/demodata/stream.hpp"

#include <cmath>
#include <numeric>

namespace gri::demodata {

double RdemoPolicy::resolve(const DemoDataset& dataset) const {
  if (dataset.episodes.empty())
    throw ValidationError("r_demo resolution: dataset has no episodes");
  if (mode == Mode::Fixed) {
    if (!std::isfinite(value))
      throw ValidationError("r_demo resolution: fixed value must be finite");
    return value;
  }
  return dataset.observed_max_step_reward;
}

DemoStream::DemoStream(std::shared_ptr<const DemoDataset> dataset, RdemoPolicy policy,
                       std::uint64_t seed)
    : dataset_(std::move(dataset)),
      r_demo_(policy.resolve(*dataset_)),
      rng_(Rng::stream(seed, /*tag=*/0x64656d6f73747200ULL)) {
  order_.resize(dataset_->episodes.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  reshuffle_locked();
}

void DemoStream::reshuffle_locked() {
  for (std::size_t i = order_.size(); i > 1; --i)
    std::swap(order_[i - 1], order_[static_cast<std::size_t>(rng_.uniform_int(i))]);
  cursor_ = 0;
}

std::vector<replay::Transition> DemoStream::next_episode() {
  std::lock_guard lock(mutex_);
  if (cursor_ >= order_.size()) reshuffle_locked();
  const DemoEpisode& ep = dataset_->episodes[order_[cursor_++]];
  emitted_ += 1;

  std::vector<replay::Transition> out;
  out.reserve(ep.size());
  for (const DemoTransition& t : ep) {
    replay::Transition rt;
    rt.state = t.state;
    rt.action = t.action;
    rt.reward = r_demo_;
    rt.next_state = t.next_state;
    rt.done = t.done;
    rt.source = replay::Source::Demonstration;
    out.push_back(std::move(rt));
  }
  return out;
}

std::uint64_t DemoStream::episodes_emitted() const {
  std::lock_guard lock(mutex_);
  return emitted_;
}

}  // namespace gri::demodata

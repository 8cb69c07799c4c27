#pragma once

#include "gri/envs/environment.hpp"
#include "gri/replay/batch.hpp"
#include "gri/replay/transition.hpp"

#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace gri::replay {

/// Bounded FIFO transition store shared by many writer threads and one
/// sampling reader (plus diagnostics). An episode append is atomic with
/// respect to sampling: a sampler never observes a partially inserted
/// episode or a half-written transition. Sampling is uniform with
/// replacement over the current contents regardless of source.
class ReplayBuffer {
public:
  ReplayBuffer(std::size_t capacity, std::size_t min_buffer, envs::EnvSignature signature);

  /// Appends an ordered episode, evicting oldest entries when full.
  /// Returns the new size.
  std::size_t append_episode(std::span<const Transition> transitions);

  bool ready() const;
  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::size_t min_buffer() const { return min_buffer_; }
  std::uint64_t insertion_count() const;
  const envs::EnvSignature& signature() const { return signature_; }

  /// Uniform sample of `batch_size` entries with replacement. Throws while
  /// size() < min_buffer (the learner is expected to wait).
  Batch sample(int batch_size, Rng& rng);

  // --- diagnostics; the only paths that may read source tags ---

  /// Fraction of current entries tagged Demonstration. Errors on empty.
  double demo_fraction() const;

  /// Total demonstration entries drawn by sample() so far.
  std::uint64_t cumulative_demo_draws() const;

  /// Snapshot iteration in insertion order (oldest first).
  void for_each(const std::function<void(const Transition&)>& fn) const;

  /// Debug dump, magic "GRIB": the demo-dataset transition layout with a
  /// trailing source byte per record.
  void dump(const std::string& path) const;

private:
  void append_one_locked(const Transition& t);

  const std::size_t capacity_;
  const std::size_t min_buffer_;
  const envs::EnvSignature signature_;

  mutable std::mutex mutex_;
  std::vector<Transition> entries_;   // ring once full
  std::size_t next_slot_ = 0;
  std::size_t size_ = 0;
  std::uint64_t insertions_ = 0;
  std::size_t demo_count_ = 0;
  std::uint64_t demo_draws_ = 0;
};

}  // namespace gri::replay

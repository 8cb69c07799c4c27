#include "gri/replay/buffer.hpp"

#include "gri/io/binary.hpp"

#include <string>

namespace gri::replay {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t min_buffer,
                           envs::EnvSignature signature)
    : capacity_(capacity), min_buffer_(min_buffer), signature_(std::move(signature)) {
  if (capacity_ == 0) throw ValidationError("replay buffer capacity must be positive");
  entries_.reserve(std::min<std::size_t>(capacity_, 1 << 20));
}

void ReplayBuffer::append_one_locked(const Transition& t) {
  if (t.state.size() != signature_.obs_dim || t.next_state.size() != signature_.obs_dim)
    throw ValidationError("replay append: observation dimension mismatch, expected " +
                          std::to_string(signature_.obs_dim));
  if (signature_.action_spec.kind == ActionKind::Discrete) {
    if (t.action.index < 0 || t.action.index >= signature_.action_spec.count)
      throw ValidationError("replay append: discrete action index out of range");
  } else if (t.action.values.size() != signature_.action_spec.dim) {
    throw ValidationError("replay append: continuous action dimension mismatch");
  }

  if (size_ < capacity_) {
    entries_.push_back(t);
    size_ += 1;
    if (t.source == Source::Demonstration) demo_count_ += 1;
  } else {
    Transition& old = entries_[next_slot_];
    if (old.source == Source::Demonstration) demo_count_ -= 1;
    if (t.source == Source::Demonstration) demo_count_ += 1;
    old = t;
  }
  next_slot_ = (next_slot_ + 1) % capacity_;
  insertions_ += 1;
}

std::size_t ReplayBuffer::append_episode(std::span<const Transition> transitions) {
  std::lock_guard lock(mutex_);
  for (const Transition& t : transitions) append_one_locked(t);
  return size_;
}

bool ReplayBuffer::ready() const {
  std::lock_guard lock(mutex_);
  return size_ >= min_buffer_;
}

std::size_t ReplayBuffer::size() const {
  std::lock_guard lock(mutex_);
  return size_;
}

std::uint64_t ReplayBuffer::insertion_count() const {
  std::lock_guard lock(mutex_);
  return insertions_;
}

Batch ReplayBuffer::sample(int batch_size, Rng& rng) {
  if (batch_size <= 0) throw ValidationError("sample: batch size must be positive");
  std::lock_guard lock(mutex_);
  if (size_ < min_buffer_)
    throw ValidationError("sample: buffer has " + std::to_string(size_) +
                          " transitions, below min_buffer " + std::to_string(min_buffer_));

  Batch batch;
  batch.action_kind = signature_.action_spec.kind;
  batch.states.resize(signature_.obs_dim, batch_size);
  batch.next_states.resize(signature_.obs_dim, batch_size);
  batch.rewards.resize(batch_size);
  batch.dones.resize(batch_size);
  if (batch.action_kind == ActionKind::Discrete)
    batch.action_indices.resize(batch_size);
  else
    batch.actions.resize(signature_.action_spec.dim, batch_size);

  for (int i = 0; i < batch_size; ++i) {
    const Transition& t = entries_[static_cast<std::size_t>(rng.uniform_int(size_))];
    batch.states.col(i) = t.state;
    batch.next_states.col(i) = t.next_state;
    batch.rewards[i] = t.reward;
    batch.dones[i] = t.done ? 1.0 : 0.0;
    if (batch.action_kind == ActionKind::Discrete)
      batch.action_indices[i] = t.action.index;
    else
      batch.actions.col(i) = t.action.values;
    if (t.source == Source::Demonstration) demo_draws_ += 1;
  }
  return batch;
}

double ReplayBuffer::demo_fraction() const {
  std::lock_guard lock(mutex_);
  if (size_ == 0) throw ValidationError("demo_fraction: buffer is empty");
  return static_cast<double>(demo_count_) / static_cast<double>(size_);
}

std::uint64_t ReplayBuffer::cumulative_demo_draws() const {
  std::lock_guard lock(mutex_);
  return demo_draws_;
}

void ReplayBuffer::for_each(const std::function<void(const Transition&)>& fn) const {
  std::lock_guard lock(mutex_);
  const std::size_t start = size_ < capacity_ ? 0 : next_slot_;
  for (std::size_t i = 0; i < size_; ++i) fn(entries_[(start + i) % size_]);
}

void ReplayBuffer::dump(const std::string& path) const {
  std::lock_guard lock(mutex_);
  io::BinaryWriter w;
  w.magic("GRIB");
  w.u32(1);
  w.str16(signature_.env_id);
  if (signature_.action_spec.kind == ActionKind::Discrete) {
    w.u8(0);
    w.u32(static_cast<std::uint32_t>(signature_.action_spec.count));
  } else {
    w.u8(1);
    w.u32(static_cast<std::uint32_t>(signature_.action_spec.dim));
    for (int i = 0; i < signature_.action_spec.dim; ++i) w.f64(signature_.action_spec.low[i]);
    for (int i = 0; i < signature_.action_spec.dim; ++i) w.f64(signature_.action_spec.high[i]);
  }
  w.u32(static_cast<std::uint32_t>(signature_.obs_dim));
  w.u32(static_cast<std::uint32_t>(size_));
  const std::size_t start = size_ < capacity_ ? 0 : next_slot_;
  for (std::size_t i = 0; i < size_; ++i) {
    const Transition& t = entries_[(start + i) % size_];
    for (int k = 0; k < signature_.obs_dim; ++k) w.f64(t.state[k]);
    if (signature_.action_spec.kind == ActionKind::Discrete)
      w.u32(static_cast<std::uint32_t>(t.action.index));
    else
      for (int k = 0; k < signature_.action_spec.dim; ++k) w.f64(t.action.values[k]);
    w.f64(t.reward);
    for (int k = 0; k < signature_.obs_dim; ++k) w.f64(t.next_state[k]);
    w.u8(t.done ? 1 : 0);
    w.u8(static_cast<std::uint8_t>(t.source));
  }
  w.write_file(path);
}

}  // namespace gri::replay

#include "gri/demodata/dataset.hpp"

#include "gri/io/binary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gri::demodata {

std::size_t DemoDataset::transition_count() const {
  std::size_t n = 0;
  for (const auto& ep : episodes) n += ep.size();
  return n;
}

void DemoDataset::refresh_max_reward() {
  double max_r = -std::numeric_limits<double>::infinity();
  for (const auto& ep : episodes)
    for (const auto& t : ep) max_r = std::max(max_r, t.env_reward);
  observed_max_step_reward = max_r;
}

double DemoDataset::mean_episode_return() const {
  if (episodes.empty()) throw ValidationError("mean_episode_return: empty dataset");
  double total = 0.0;
  for (const auto& ep : episodes)
    for (const auto& t : ep) total += t.env_reward;
  return total / static_cast<double>(episodes.size());
}

DemoDataset record(envs::Environment& env, const envs::ExpertPolicy& expert,
                   std::size_t n_transitions, std::uint64_t seed) {
  if (n_transitions == 0) throw ValidationError("record: n_transitions must be positive");
  if (expert.env_id() != env.signature().env_id)
    throw ValidationError("record: expert for \"" + expert.env_id() +
                          "\" does not match environment \"" + env.signature().env_id + "\"");

  DemoDataset ds;
  ds.env_id = env.signature().env_id;
  ds.action_spec = env.signature().action_spec;
  ds.obs_dim = env.signature().obs_dim;

  Rng episode_seeds = Rng::stream(seed, /*tag=*/0x7265636f72640000ULL);
  while (ds.transition_count() < n_transitions) {
    DemoEpisode episode;
    Vector obs = env.reset(episode_seeds.next_u64());
    bool done = false;
    while (!done) {
      const Action action = expert.act(obs);
      const auto result = env.step(action);
      episode.push_back({obs, action, result.reward, result.observation, result.done});
      obs = result.observation;
      done = result.done;
    }
    ds.episodes.push_back(std::move(episode));
  }
  ds.refresh_max_reward();
  return ds;
}

namespace {

constexpr char kMagic[4] = {'G', 'R', 'I', 'D'};
constexpr std::uint32_t kVersion = 1;

void write_action(io::BinaryWriter& w, const ActionSpec& spec, const Action& a) {
  if (spec.kind == ActionKind::Discrete) {
    w.u32(static_cast<std::uint32_t>(a.index));
  } else {
    for (int i = 0; i < spec.dim; ++i) w.f64(a.values[i]);
  }
}

Action read_action(io::BinaryReader& r, const ActionSpec& spec) {
  if (spec.kind == ActionKind::Discrete) {
    const std::uint32_t idx = r.u32();
    if (idx >= static_cast<std::uint32_t>(spec.count)) r.fail("action index out of range");
    return Action::discrete(static_cast<int>(idx));
  }
  Vector v(spec.dim);
  for (int i = 0; i < spec.dim; ++i) v[i] = r.f64();
  return Action::continuous(std::move(v));
}

}  // namespace

void save(const DemoDataset& dataset, const std::string& path) {
  io::BinaryWriter w;
  w.magic(kMagic);
  w.u32(kVersion);
  w.str16(dataset.env_id);
  if (dataset.action_spec.kind == ActionKind::Discrete) {
    w.u8(0);
    w.u32(static_cast<std::uint32_t>(dataset.action_spec.count));
  } else {
    w.u8(1);
    w.u32(static_cast<std::uint32_t>(dataset.action_spec.dim));
    for (int i = 0; i < dataset.action_spec.dim; ++i) w.f64(dataset.action_spec.low[i]);
    for (int i = 0; i < dataset.action_spec.dim; ++i) w.f64(dataset.action_spec.high[i]);
  }
  w.u32(static_cast<std::uint32_t>(dataset.obs_dim));
  w.u32(static_cast<std::uint32_t>(dataset.episodes.size()));
  for (const auto& ep : dataset.episodes) {
    w.u32(static_cast<std::uint32_t>(ep.size()));
    for (const auto& t : ep) {
      for (int i = 0; i < dataset.obs_dim; ++i) w.f64(t.state[i]);
      write_action(w, dataset.action_spec, t.action);
      w.f64(t.env_reward);
      for (int i = 0; i < dataset.obs_dim; ++i) w.f64(t.next_state[i]);
      w.u8(t.done ? 1 : 0);
    }
  }
  w.write_file(path);
}

DemoDataset load(const std::string& path) {
  io::BinaryReader r = io::BinaryReader::from_file(path);
  r.magic(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kVersion) r.fail("unsupported dataset version " + std::to_string(version));

  DemoDataset ds;
  ds.env_id = r.str16();
  const std::uint8_t kind = r.u8();
  if (kind == 0) {
    const std::uint32_t n = r.u32();
    if (n == 0) r.fail("discrete action spec with zero actions");
    ds.action_spec = ActionSpec::discrete(static_cast<int>(n));
  } else if (kind == 1) {
    const std::uint32_t d = r.u32();
    if (d == 0) r.fail("continuous action spec with zero dimensions");
    Vector low(d), high(d);
    for (std::uint32_t i = 0; i < d; ++i) low[i] = r.f64();
    for (std::uint32_t i = 0; i < d; ++i) high[i] = r.f64();
    ds.action_spec = ActionSpec::continuous(std::move(low), std::move(high));
  } else {
    r.fail("unknown action spec tag " + std::to_string(kind));
  }
  ds.obs_dim = static_cast<int>(r.u32());
  if (ds.obs_dim <= 0) r.fail("non-positive observation dimension");

  const std::uint32_t n_episodes = r.u32();
  ds.episodes.reserve(n_episodes);
  for (std::uint32_t e = 0; e < n_episodes; ++e) {
    const std::uint32_t len = r.u32();
    if (len == 0) r.fail("empty episode " + std::to_string(e));
    DemoEpisode ep;
    ep.reserve(len);
    for (std::uint32_t i = 0; i < len; ++i) {
      DemoTransition t;
      t.state.resize(ds.obs_dim);
      for (int k = 0; k < ds.obs_dim; ++k) t.state[k] = r.f64();
      t.action = read_action(r, ds.action_spec);
      t.env_reward = r.f64();
      t.next_state.resize(ds.obs_dim);
      for (int k = 0; k < ds.obs_dim; ++k) t.next_state[k] = r.f64();
      const std::uint8_t done = r.u8();
      if (done > 1) r.fail("done flag must be 0 or 1");
      t.done = done == 1;
      if (t.done && i + 1 != len) r.fail("done flag before the end of episode");
      ep.push_back(std::move(t));
    }
    if (!ep.back().done) r.fail("episode " + std::to_string(e) + " does not end with done");
    ds.episodes.push_back(std::move(ep));
  }
  if (!r.exhausted()) r.fail("trailing bytes after dataset payload");
  ds.refresh_max_reward();
  return ds;
}

DemoDataset corrupt(const DemoDataset& dataset, double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw ValidationError("corrupt: fraction must be in [0, 1]");

  DemoDataset out = dataset;
  const std::size_t total = out.transition_count();
  const auto n_corrupt = static_cast<std::size_t>(std::floor(fraction * total));
  if (n_corrupt == 0) return out;

  std::vector<DemoTransition*> flat;
  flat.reserve(total);
  for (auto& ep : out.episodes)
    for (auto& t : ep) flat.push_back(&t);

  Rng rng = Rng::stream(seed, /*tag=*/0x636f727275707400ULL);
  // Partial Fisher-Yates: the first n_corrupt slots are a uniform subset.
  for (std::size_t i = 0; i < n_corrupt; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(total - i));
    std::swap(flat[i], flat[j]);
  }
  for (std::size_t i = 0; i < n_corrupt; ++i) {
    Action& a = flat[i]->action;
    if (out.action_spec.kind == ActionKind::Discrete) {
      if (out.action_spec.count < 2)
        throw ValidationError("corrupt: cannot replace actions in a 1-action space");
      int replacement = a.index;
      while (replacement == a.index)
        replacement = static_cast<int>(rng.uniform_int(out.action_spec.count));
      a.index = replacement;
    } else {
      Vector v(out.action_spec.dim);
      for (int k = 0; k < out.action_spec.dim; ++k)
        v[k] = rng.uniform(out.action_spec.low[k], out.action_spec.high[k]);
      a.values = std::move(v);
    }
  }
  return out;
}

}  // namespace gri::demodata

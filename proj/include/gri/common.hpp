#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace gri {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Input or configuration rejected before any work started (exit code 1).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A running experiment had to stop (non-finite loss, worker failure); exit code 2.
class RunAbortError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed binary file; `offset` is the byte position where parsing failed.
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

private:
  std::uint64_t offset_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded random stream. Named sub-streams keep the orchestrator's draws
/// (source selection, action noise, batch sampling, ...) decoupled so adding
/// draws to one stream never shifts another.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Derives an independent stream from (seed, tag) without consuming state.
  static Rng stream(std::uint64_t seed, std::uint64_t tag) {
    return Rng(splitmix64(seed ^ splitmix64(tag)));
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Uniform integer in [0, n).
  std::int64_t uniform_int(std::int64_t n) {
    return std::uniform_int_distribution<std::int64_t>(0, n - 1)(engine_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  Vector normal_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal();
    return v;
  }

  Matrix normal_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) m(r, c) = normal();
    return m;
  }

  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
};

enum class ActionKind { Discrete, Continuous };

/// Shape of an environment's action space. Continuous bounds are per-dimension.
struct ActionSpec {
  ActionKind kind = ActionKind::Discrete;
  int count = 0;  // discrete: number of actions
  int dim = 0;    // continuous: action dimension
  Vector low, high;

  static ActionSpec discrete(int n) {
    ActionSpec s;
    s.kind = ActionKind::Discrete;
    s.count = n;
    return s;
  }

  static ActionSpec continuous(Vector low, Vector high) {
    ActionSpec s;
    s.kind = ActionKind::Continuous;
    s.dim = static_cast<int>(low.size());
    s.low = std::move(low);
    s.high = std::move(high);
    return s;
  }

  bool operator==(const ActionSpec& o) const {
    if (kind != o.kind) return false;
    if (kind == ActionKind::Discrete) return count == o.count;
    return dim == o.dim && low == o.low && high == o.high;
  }
};

/// One environment action: a discrete index or a continuous vector,
/// matching the owning environment's ActionSpec.
struct Action {
  int index = -1;
  Vector values;

  static Action discrete(int i) {
    Action a;
    a.index = i;
    return a;
  }

  static Action continuous(Vector v) {
    Action a;
    a.values = std::move(v);
    return a;
  }
};

}  // namespace gri

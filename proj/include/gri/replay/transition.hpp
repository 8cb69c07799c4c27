#pragma once

#include "gri/common.hpp"

namespace gri::replay {

enum class Source : std::uint8_t { Exploration = 0, Demonstration = 1 };

/// One stored step. The source tag exists for diagnostics only; it is
/// stripped before anything reaches a learner (see Batch).
struct Transition {
  Vector state;
  Action action;
  double reward = 0.0;
  Vector next_state;
  bool done = false;
  Source source = Source::Exploration;
};

}  // namespace gri::replay

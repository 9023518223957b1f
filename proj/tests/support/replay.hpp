#pragma once

// Independent witness validation: turns a lasso into difference constraints over firing times
// and solves them exactly.

#include <string>
#include <vector>

#include "tta/automaton.hpp"
#include "tta/emptiness.hpp"

namespace tta::test {

struct ReplayOptions {
  std::size_t unroll = 0;         // cycle repetitions; 0 picks largest constant + 2
  bool strictly_increasing = false;
};

struct ReplayResult {
  bool ok = false;
  std::string reason;
  std::vector<Rational> timestamps;  // firing time of every replayed step
};

// Replays prefix . cycle^K on `ta` (integer constants). Besides the guards, the K cycle passes
// must take at least K - 1 time units together, which fails for lassos that force time to
// converge.
ReplayResult replay_witness(const TimedAutomaton& ta, const Witness& w, const ReplayOptions& options = {});

}  // namespace tta::test

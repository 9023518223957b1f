#pragma once

#include <cstddef>
#include <cstdint>

#include "tta/automaton.hpp"

namespace tta {

struct RegionLimits {
  std::int64_t max_constant = 4;
  std::size_t max_locations = 16;
  std::size_t max_clocks = 4;
};

// Reference Buechi emptiness check over the explicit region graph. Accepts a non-Zeno run iff
// some reachable strongly connected set has an accepting location, a delay step, an action
// step, and every clock is either reset inside it or stays above the largest constant.
// Refuses inputs beyond `limits` with ErrorKind::Limit.
bool region_brute_force(const TimedAutomaton& ta, const RegionLimits& limits = {});

}  // namespace tta

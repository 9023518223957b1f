#pragma once

#include <cstdint>
#include <random>

#include "tta/automaton.hpp"

namespace tta::test {

struct RandomTaConfig {
  std::size_t max_locations = 6;
  std::size_t max_transitions = 10;
  std::int64_t max_const = 3;
  std::size_t clocks = 2;
  double accepting_probability = 0.35;
  std::int64_t denominator = 1;  // constants are multiples of 1/denominator
};

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound);  // uniform in [0, bound)

TimedAutomaton random_ta(std::mt19937_64& rng, const RandomTaConfig& cfg = {});

}  // namespace tta::test

namespace tta::test {

// Two clocks, one parameter "mu", and no transition resetting a clock it tests.
TimedAutomaton random_pta(std::mt19937_64& rng, const RandomTaConfig& cfg = {});

}  // namespace tta::test

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tta/automaton.hpp"

namespace tta {

// One step of a lasso: a transition and the disjunct of its guard that was taken.
struct WitnessStep {
  std::size_t transition = 0;
  std::size_t clause = 0;
  friend bool operator==(const WitnessStep&, const WitnessStep&) = default;
};

// Lasso prefix . cycle^omega. Rendered as "prefix: t3 t7 / cycle: t2 t5 t2".
struct Witness {
  std::vector<WitnessStep> prefix;
  std::vector<WitnessStep> cycle;

  std::string str() const;
  static Witness parse(const std::string& text);
  friend bool operator==(const Witness&, const Witness&) = default;
};

// Rotates shared suffixes of prefix and cycle into the cycle and reduces the cycle to its
// primitive root. The omega-word of transitions is unchanged.
Witness normalize_lasso(Witness w);

struct BuchiOptions {
  std::optional<std::int64_t> extrapolation;  // defaults to max(max constant, 1)
  std::size_t max_nodes = 0;                  // 0: unlimited
};

struct BuchiResult {
  bool nonempty = false;
  std::optional<Witness> witness;
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

// Buechi emptiness for non-parametric automata with integer constants under weakly monotonic
// time with divergence: a witness exists iff some run visits accepting locations infinitely
// often while time grows without bound.
BuchiResult buchi_emptiness(const TimedAutomaton& ta, const BuchiOptions& options = {});

}  // namespace tta

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tta/guard.hpp"

namespace tta {

struct Location {
  std::string name;
  bool accepting = false;
};

struct Transition {
  std::size_t src = 0;
  std::size_t dst = 0;
  Guard guard = Guard::top();
  std::vector<std::size_t> resets;  // sorted, duplicate free
  std::string letter = "a";
};

// Timed Buechi automaton with at most one parameter.
struct TimedAutomaton {
  std::vector<std::string> clocks;
  std::optional<std::string> parameter;
  std::vector<Location> locations;
  std::size_t initial = 0;
  std::vector<Transition> transitions;

  std::size_t size() const { return locations.size() + transitions.size(); }
  std::optional<std::size_t> find_clock(const std::string& name) const;
  std::optional<std::size_t> find_location(const std::string& name) const;
  std::size_t add_clock(const std::string& name);
  std::size_t add_location(const std::string& name, bool accepting = false);
  std::vector<std::string> alphabet() const;
  bool is_parametric() const;

  // Structural sanity: indices in range, unique names, sorted resets.
  void check_well_formed() const;
};

// A timed automaton with exactly two clocks and one parameter whose transitions never
// test and reset the same clock. The invariant is checked on construction.
class ParametricTA {
 public:
  static ParametricTA from(TimedAutomaton ta);
  const TimedAutomaton& ta() const { return ta_; }

 private:
  explicit ParametricTA(TimedAutomaton ta) : ta_(std::move(ta)) {}
  TimedAutomaton ta_;
};

// Index of the first transition that tests a clock it also resets.
std::optional<std::size_t> find_nrt_violation(const TimedAutomaton& ta);
void require_nrt(const TimedAutomaton& ta);

// Largest integer constant in non-parametric atoms. Throws on non-integer constants.
std::int64_t max_constant(const TimedAutomaton& ta);

TimedAutomaton substitute_parameter(const ParametricTA& pta, const Rational& value);

// Multiplies every constant by the lcm of their denominators.
std::pair<TimedAutomaton, std::int64_t> scale_to_integers(const TimedAutomaton& ta);
TimedAutomaton scale_by(const TimedAutomaton& ta, std::int64_t factor);

// Adds a fresh clock z, reset on every transition, with z > 0 conjoined to every guard.
TimedAutomaton enforce_strict_monotonicity(const TimedAutomaton& ta, const std::string& clock_name = "z");

}  // namespace tta

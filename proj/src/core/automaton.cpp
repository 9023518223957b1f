#include "tta/automaton.hpp"

#include <algorithm>
#include <set>

namespace tta {

std::optional<std::size_t> TimedAutomaton::find_clock(const std::string& name) const {
  for (std::size_t i = 0; i < clocks.size(); ++i)
    if (clocks[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> TimedAutomaton::find_location(const std::string& name) const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i].name == name) return i;
  return std::nullopt;
}

std::size_t TimedAutomaton::add_clock(const std::string& name) {
  if (auto c = find_clock(name)) return *c;
  clocks.push_back(name);
  return clocks.size() - 1;
}

std::size_t TimedAutomaton::add_location(const std::string& name, bool accepting) {
  if (find_location(name)) fail(ErrorKind::Invalid, "duplicate location '" + name + "'");
  locations.push_back(Location{name, accepting});
  return locations.size() - 1;
}

std::vector<std::string> TimedAutomaton::alphabet() const {
  std::set<std::string> s;
  for (const auto& t : transitions) s.insert(t.letter);
  return {s.begin(), s.end()};
}

bool TimedAutomaton::is_parametric() const {
  if (parameter) return true;
  return std::any_of(transitions.begin(), transitions.end(),
                     [](const Transition& t) { return mentions_parameter(t.guard); });
}

void TimedAutomaton::check_well_formed() const {
  if (locations.empty()) fail(ErrorKind::Invalid, "automaton has no locations");
  if (initial >= locations.size()) fail(ErrorKind::Invalid, "initial location out of range");
  std::set<std::string> names;
  for (const auto& l : locations)
    if (!names.insert(l.name).second) fail(ErrorKind::Invalid, "duplicate location '" + l.name + "'");
  std::set<std::string> cnames(clocks.begin(), clocks.end());
  if (cnames.size() != clocks.size()) fail(ErrorKind::Invalid, "duplicate clock name");
  if (parameter && cnames.count(*parameter)) fail(ErrorKind::Invalid, "parameter name clashes with a clock");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const auto& t = transitions[i];
    if (t.src >= locations.size() || t.dst >= locations.size())
      fail(ErrorKind::Invalid, "transition t" + std::to_string(i) + " references a missing location");
    for (std::size_t k = 0; k < t.resets.size(); ++k) {
      if (t.resets[k] >= clocks.size())
        fail(ErrorKind::Invalid, "transition t" + std::to_string(i) + " resets a missing clock");
      if (k > 0 && t.resets[k - 1] >= t.resets[k])
        fail(ErrorKind::Invalid, "transition t" + std::to_string(i) + " has unsorted resets");
    }
    for (const auto& c : t.guard.clauses)
      for (const auto& a : c) {
        if (a.clock >= clocks.size())
          fail(ErrorKind::Invalid, "transition t" + std::to_string(i) + " tests a missing clock");
        if (a.parametric && !parameter)
          fail(ErrorKind::Invalid, "transition t" + std::to_string(i) + " uses an undeclared parameter");
        if (!a.parametric && a.constant < 0)
          fail(ErrorKind::Invalid, "transition t" + std::to_string(i) + " has a negative constant");
      }
  }
}

ParametricTA ParametricTA::from(TimedAutomaton ta) {
  ta.check_well_formed();
  if (!ta.parameter) fail(ErrorKind::Invalid, "parametric automaton needs exactly one parameter");
  if (ta.clocks.size() != 2)
    fail(ErrorKind::Invalid, "parametric automaton needs exactly two clocks, found " + std::to_string(ta.clocks.size()));
  require_nrt(ta);
  return ParametricTA(std::move(ta));
}

std::optional<std::size_t> find_nrt_violation(const TimedAutomaton& ta) {
  for (std::size_t i = 0; i < ta.transitions.size(); ++i) {
    const auto& t = ta.transitions[i];
    for (auto c : clocks_of(t.guard))
      if (std::binary_search(t.resets.begin(), t.resets.end(), c)) return i;
  }
  return std::nullopt;
}

void require_nrt(const TimedAutomaton& ta) {
  if (auto v = find_nrt_violation(ta)) {
    const auto& t = ta.transitions[*v];
    fail(ErrorKind::Invalid, "transition t" + std::to_string(*v) + " (" + ta.locations[t.src].name + " -> " +
                                 ta.locations[t.dst].name + ") tests and resets the same clock");
  }
}

std::int64_t max_constant(const TimedAutomaton& ta) {
  std::int64_t m = 0;
  for (const auto& t : ta.transitions)
    for (const auto& c : t.guard.clauses)
      for (const auto& a : c) {
        if (a.parametric) continue;
        if (!a.constant.is_integer()) fail(ErrorKind::Invalid, "non-integer constant " + a.constant.str());
        m = std::max(m, a.constant.num());
      }
  return m;
}

TimedAutomaton substitute_parameter(const ParametricTA& pta, const Rational& value) {
  if (value < 0) fail(ErrorKind::Invalid, "parameter value must be non-negative");
  TimedAutomaton out = pta.ta();
  out.parameter.reset();
  for (auto& t : out.transitions)
    for (auto& c : t.guard.clauses)
      for (auto& a : c)
        if (a.parametric) {
          a.parametric = false;
          a.constant = value;
        }
  return out;
}

TimedAutomaton scale_by(const TimedAutomaton& ta, std::int64_t factor) {
  if (factor <= 0) fail(ErrorKind::Invalid, "scale factor must be positive");
  TimedAutomaton out = ta;
  for (auto& t : out.transitions)
    for (auto& c : t.guard.clauses)
      for (auto& a : c)
        if (!a.parametric) a.constant = a.constant * Rational(factor);
  return out;
}

std::pair<TimedAutomaton, std::int64_t> scale_to_integers(const TimedAutomaton& ta) {
  std::int64_t scale = 1;
  for (const auto& t : ta.transitions)
    for (const auto& c : t.guard.clauses)
      for (const auto& a : c)
        if (!a.parametric) scale = checked_lcm(scale, a.constant.den());
  return {scale_by(ta, scale), scale};
}

TimedAutomaton enforce_strict_monotonicity(const TimedAutomaton& ta, const std::string& clock_name) {
  if (ta.find_clock(clock_name)) fail(ErrorKind::Invalid, "clock name '" + clock_name + "' already in use");
  TimedAutomaton out = ta;
  std::size_t z = out.add_clock(clock_name);
  Atom positive{z, Cmp::Gt, false, Rational(0)};
  for (auto& t : out.transitions) {
    t.guard = t.guard.conj(Guard::atom(positive));
    t.resets.push_back(z);  // z has the largest index, so resets stay sorted
  }
  return out;
}

}  // namespace tta

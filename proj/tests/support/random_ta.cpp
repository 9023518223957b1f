#include "support/random_ta.hpp"

#include <algorithm>

namespace tta::test {

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return bound == 0 ? 0 : rng() % bound; }

TimedAutomaton random_ta(std::mt19937_64& rng, const RandomTaConfig& cfg) {
  TimedAutomaton ta;
  static const char* names[] = {"x", "y", "u", "v", "w"};
  for (std::size_t c = 0; c < cfg.clocks; ++c) ta.clocks.push_back(names[c % 5]);
  const std::size_t nloc = 1 + draw(rng, cfg.max_locations);
  for (std::size_t l = 0; l < nloc; ++l)
    ta.locations.push_back(Location{"l" + std::to_string(l), (rng() % 1000) < cfg.accepting_probability * 1000});
  const std::size_t ntr = 1 + draw(rng, cfg.max_transitions);
  for (std::size_t i = 0; i < ntr; ++i) {
    Transition t;
    t.src = draw(rng, nloc);
    t.dst = draw(rng, nloc);
    Clause clause;
    const std::size_t atoms = draw(rng, 3);
    for (std::size_t a = 0; a < atoms; ++a) {
      Atom atom;
      atom.clock = draw(rng, cfg.clocks);
      atom.cmp = static_cast<Cmp>(draw(rng, 5));
      atom.constant = Rational(static_cast<std::int64_t>(draw(rng, static_cast<std::uint64_t>(cfg.max_const * cfg.denominator + 1))),
                               cfg.denominator);
      clause.push_back(atom);
    }
    t.guard = Guard{{clause}};
    for (std::size_t c = 0; c < cfg.clocks; ++c)
      if (rng() % 2) t.resets.push_back(c);
    ta.transitions.push_back(std::move(t));
  }
  return ta;
}

}  // namespace tta::test

namespace tta::test {

TimedAutomaton random_pta(std::mt19937_64& rng, const RandomTaConfig& cfg) {
  RandomTaConfig two = cfg;
  two.clocks = 2;
  TimedAutomaton ta = random_ta(rng, two);
  ta.parameter = "mu";
  for (auto& t : ta.transitions) {
    for (auto& a : t.guard.clauses[0])
      if (a.cmp != Cmp::Le && a.cmp != Cmp::Ge && draw(rng, 3) == 0) a.parametric = true;
    auto tested = clocks_of(t.guard);
    std::vector<std::size_t> keep;
    for (auto r : t.resets)
      if (!std::binary_search(tested.begin(), tested.end(), r)) keep.push_back(r);
    t.resets = keep;
  }
  return ta;
}

}  // namespace tta::test

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tta/automaton.hpp"
#include "tta/semiring.hpp"
#include "tta/tiles.hpp"

namespace tta {

// Timed automaton with a cost per time unit in each location and a cost per location pair
// (every transition between the same two locations costs the same). Goals are the accepting
// locations.
struct PricedTA {
  TimedAutomaton base;
  std::vector<std::uint64_t> location_cost;                            // per location
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> edge_cost;  // missing pairs cost 0

  std::uint64_t cost_of(std::size_t src, std::size_t dst) const;
  void check() const;
};

// The automaton text format plus `cost location <loc> <n>` and `cost edge <src> <dst> <n>`.
// Locations without a cost line cost 0.
PricedTA parse_priced_ta(const std::string& text);
PricedTA load_priced_ta(const std::string& path);
std::string write_priced_ta(const PricedTA& pta);

// (location, absolute time) pairs; times start at 0 and strictly increase.
struct TimedRun {
  std::vector<std::pair<std::size_t, Rational>> steps;
};

// Sum over steps of c(q_k) * (t_{k+1} - t_k) + c(q_k, q_{k+1}). Throws Invalid when no
// sequence of transitions realises the run.
Rational run_cost(const PricedTA& pta, const TimedRun& run);

// Lower bound on the cost of crossing a two-location tile whose input resets x, whose single
// edge requires 0 < x < alpha and whose output requires x == alpha:
// alpha * min(c(q0), c(q1)) + c(q0, q1).
std::uint64_t tile_weight_elementary(const Tile& tile, std::uint64_t alpha);

// Two-location priced tile of that shape, with its weight filled in. An accepting variant
// makes q1 the goal; its weight is c(q0, q1), the infimum over ever shorter stays in q0.
Tile priced_elementary_tile(const std::string& name, std::uint64_t alpha, std::uint64_t c_q0, std::uint64_t c_q1,
                            std::uint64_t c_t0, bool accepting = false);

// Underlying min-plus automaton: a connection weighs the output weight of its source tile
// plus its own cost; accepting tiles end with their own weight.
WeightedAutomaton<PriceSemiring> priced_wa(const TiledTA& tta);
Price priced_oracle(const TiledTA& tta);
// Cheapest simple tile path from the initial tile to an accepting one.
Price min_cost_brute(const TiledTA& tta);

// Location and edge costs of the tiles plus connection costs on the flattening.
PricedTA flatten_priced(const TiledTA& tta);

// Random tree of priced elementary tiles (some two-output variants), with extra connections
// that may close cycles.
TiledTA generate_priced_tta(std::uint64_t seed, std::size_t max_tiles);

}  // namespace tta

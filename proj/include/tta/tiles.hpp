#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tta/automaton.hpp"
#include "tta/emptiness.hpp"
#include "tta/intervals.hpp"
#include "tta/weighted.hpp"

namespace tta {

// Compatibility data of an input or output location: the guard a connecting transition
// must satisfy and the clocks it resets.
struct TilePort {
  std::string location;
  Guard guard = Guard::top();
  std::vector<std::string> resets;
};

// Key naming the parameter set (or weight) of an accepting tile.
inline constexpr const char* kSelf = "self";

struct Tile {
  std::string name;
  TimedAutomaton body;  // `initial` is unused
  std::vector<TilePort> inputs;
  std::vector<TilePort> outputs;
  std::map<std::string, IntervalSet> declared;  // output location or kSelf

  // Priced extension.
  std::map<std::string, std::uint64_t> location_cost;
  std::map<std::pair<std::string, std::string>, std::uint64_t> edge_cost;
  std::map<std::string, std::uint64_t> weight;  // output location or kSelf

  bool accepting() const;
  const TilePort& input() const;
  const TilePort* find_input(const std::string& location) const;
  const TilePort* find_output(const std::string& location) const;
  // Outputs for ordinary tiles, {kSelf} for accepting ones.
  std::vector<std::string> weight_keys() const;
  void check() const;
};

// Three-location tile forcing mu ~ n/2:
// q0 -(y == mu, reset x)-> q1 -(x == mu && y ~ n)-> q2, entered resetting y.
// With `swapped` the roles of x and y are exchanged.
Tile elementary_tile(std::int64_t n, Cmp cmp, bool swapped = false);

struct TileInstance {
  std::string id;
  Tile tile;
};

struct TileTransition {
  std::size_t src = 0;
  std::string output;
  std::size_t dst = 0;
  std::string input;
  std::string letter = "a";
  std::uint64_t cost = 0;
};

struct TiledTA {
  std::vector<TileInstance> tiles;
  std::size_t initial = 0;
  std::vector<TileTransition> connections;
  std::int64_t ambient_c = 0;

  std::optional<std::size_t> find(const std::string& id) const;
  bool is_accepting(std::size_t tile) const { return tiles.at(tile).tile.accepting(); }
  std::size_t size() const;  // locations plus transitions of the flattening
  void check() const;
};

// Whether every valuation satisfying the output guard satisfies the input guard.
bool validate_connection(const Tile& from, const std::string& output, const Tile& to, const std::string& input);
// Reason the connection is not allowed, if any: a failed implication, or (between parametric
// tiles) a clock both tested by the output guard and reset by the combined resets.
std::optional<std::string> connection_problem(const Tile& from, const std::string& output, const Tile& to,
                                              const std::string& input);

struct Flattening {
  TimedAutomaton ta;
  std::vector<std::size_t> owner;                      // location -> tile
  std::vector<std::optional<std::size_t>> connection;  // transition -> connection, if any
};
Flattening flatten_with_map(const TiledTA& tta);
TimedAutomaton flatten(const TiledTA& tta);

struct ProbeOptions {
  // Clock values on entry for clocks the input does not reset; others enter at 0.
  std::vector<std::pair<std::string, Rational>> entry;
  BuchiOptions buchi;
};
// Union of the canonical intervals (for ambient C) whose representative lets the tile reach
// the output (and leave it through its output guard), or run forever through accepting
// locations when key is kSelf.
IntervalSet compute_parameter_set(const Tile& tile, const std::string& key, std::int64_t ambient_c,
                                  const ProbeOptions& options = {});
// The probe automaton used by compute_parameter_set.
ParametricTA parameter_probe(const Tile& tile, const std::string& key, const ProbeOptions& options = {});
bool check_productive(const Tile& tile, const std::map<std::string, BitWord>& declared, std::int64_t ambient_c);

using WeightFunction = std::map<std::pair<std::size_t, std::string>, BitWord>;
WeightFunction declared_weights(const TiledTA& tta);
WeightedAutomaton<BitSemiring> underlying_wa(const TiledTA& tta, const WeightFunction& weights);

}  // namespace tta

#include "tta/tiles.hpp"

#include <algorithm>
#include <set>

#include "tta/dbm.hpp"
#include "tta/empcheck.hpp"
#include "tta/error.hpp"

namespace tta {

namespace {

std::string port_name(const std::string& tile, const std::string& loc) { return tile + "." + loc; }

// Re-indexes the clocks of g from one clock list to another by name.
Guard remap(const Guard& g, const std::vector<std::string>& from, const std::vector<std::string>& to) {
  Guard out = g;
  for (auto& c : out.clauses)
    for (auto& a : c) {
      auto it = std::find(to.begin(), to.end(), from.at(a.clock));
      if (it == to.end()) fail(ErrorKind::Internal, "clock '" + from.at(a.clock) + "' missing after remapping");
      a.clock = static_cast<std::size_t>(it - to.begin());
    }
  return out;
}

std::vector<std::size_t> clock_indices(const std::vector<std::string>& names, const std::vector<std::string>& clocks) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    auto it = std::find(clocks.begin(), clocks.end(), n);
    if (it == clocks.end()) fail(ErrorKind::Invalid, "unknown clock '" + n + "'");
    out.push_back(static_cast<std::size_t>(it - clocks.begin()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Dbm clause_zone(const Clause& c, std::size_t clocks) {
  Dbm d(clocks);
  for (const auto& a : c) {
    if (a.parametric) fail(ErrorKind::Unsupported, "compatibility guards cannot mention the parameter");
    if (!a.constant.is_integer()) fail(ErrorKind::Unsupported, "compatibility guards need integer constants");
    const std::int64_t v = a.constant.num();
    const std::size_t i = a.clock + 1;
    switch (a.cmp) {
      case Cmp::Lt: d.constrain(i, 0, bound(v, true)); break;
      case Cmp::Le: d.constrain(i, 0, bound(v, false)); break;
      case Cmp::Eq:
        d.constrain(i, 0, bound(v, false));
        d.constrain(0, i, bound(-v, false));
        break;
      case Cmp::Ge: d.constrain(0, i, bound(-v, false)); break;
      case Cmp::Gt: d.constrain(0, i, bound(-v, true)); break;
    }
    if (d.is_empty()) break;
  }
  return d;
}

// a implies b over non-negative valuations, decided by emptiness of each zone of a && !b.
bool implies(const Guard& a, const Guard& b, std::size_t clocks) {
  for (const auto& c : a.clauses) clause_zone(c, clocks);  // rejects parametric atoms
  for (const auto& c : b.clauses) clause_zone(c, clocks);
  Guard rest = a.conj(b.negate());
  return std::all_of(rest.clauses.begin(), rest.clauses.end(),
                     [&](const Clause& c) { return clause_zone(c, clocks).is_empty(); });
}

std::vector<std::string> union_clocks(const Tile& a, const Tile& b) {
  std::vector<std::string> out = a.body.clocks;
  for (const auto& c : b.body.clocks)
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

const TilePort& require_output(const Tile& t, const std::string& loc) {
  const TilePort* p = t.find_output(loc);
  if (!p) fail(ErrorKind::Invalid, "tile '" + t.name + "' has no output '" + loc + "'");
  return *p;
}

const TilePort& require_input(const Tile& t, const std::string& loc) {
  const TilePort* p = t.find_input(loc);
  if (!p) fail(ErrorKind::Invalid, "tile '" + t.name + "' has no input '" + loc + "'");
  return *p;
}

std::int64_t ceil_constant(const TimedAutomaton& ta) {
  std::int64_t m = 0;
  for (const auto& t : ta.transitions)
    for (const auto& c : t.guard.clauses)
      for (const auto& a : c)
        if (!a.parametric) m = std::max(m, (a.constant.num() + a.constant.den() - 1) / a.constant.den());
  return m;
}

// Chain of locations that lets time pass from all-zero clocks until the non-reset clocks carry
// the requested values, then enters the input location.
void add_entry_gadget(TimedAutomaton& ta, std::size_t input, const std::vector<std::size_t>& input_resets,
                      const std::vector<std::pair<std::size_t, Rational>>& targets) {
  Rational top(0);
  std::size_t pivot = 0;
  for (const auto& [c, v] : targets)
    if (v > top) {
      top = v;
      pivot = c;
    }
  if (top == Rational(0)) return;  // entering at time zero is the same as entering with all clocks at zero

  std::vector<Rational> levels;  // distinct values below the top, descending
  for (const auto& [c, v] : targets)
    if (v < top && v > Rational(0) && std::find(levels.begin(), levels.end(), v) == levels.end()) levels.push_back(v);
  std::sort(levels.rbegin(), levels.rend());

  auto eq = [&](const Rational& v) {
    Atom a;
    a.clock = pivot;
    a.cmp = Cmp::Eq;
    a.constant = v;
    return Guard::atom(a);
  };
  std::size_t cur = ta.add_location("probe.entry0");
  ta.initial = cur;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    std::size_t next = ta.add_location("probe.entry" + std::to_string(i + 1));
    Transition t;
    t.src = cur;
    t.dst = next;
    t.guard = eq(top - levels[i]);
    for (const auto& [c, v] : targets)
      if (v == levels[i]) t.resets.push_back(c);
    std::sort(t.resets.begin(), t.resets.end());
    ta.transitions.push_back(t);
    cur = next;
  }
  Transition enter;
  enter.src = cur;
  enter.dst = input;
  enter.guard = eq(top);
  std::set<std::size_t> resets(input_resets.begin(), input_resets.end());
  for (const auto& [c, v] : targets)
    if (v == Rational(0)) resets.insert(c);
  for (std::size_t c = 0; c < ta.clocks.size(); ++c)
    if (std::none_of(targets.begin(), targets.end(), [&](const auto& p) { return p.first == c; })) resets.insert(c);
  enter.resets.assign(resets.begin(), resets.end());
  ta.transitions.push_back(enter);
}

Rational representative(std::int64_t ambient_c, std::size_t index, const Representatives& r) {
  Interval i = canonical_interval(ambient_c, index);
  if (i.hi_infinite) return r.xi;
  if (i.lo == i.hi) return i.lo;
  return i.lo + r.alpha;
}

}  // namespace

bool Tile::accepting() const {
  return std::any_of(body.locations.begin(), body.locations.end(), [](const Location& l) { return l.accepting; });
}

const TilePort& Tile::input() const {
  if (inputs.empty()) fail(ErrorKind::Invalid, "tile '" + name + "' has no input location");
  return inputs.front();
}

const TilePort* Tile::find_input(const std::string& location) const {
  for (const auto& p : inputs)
    if (p.location == location) return &p;
  return nullptr;
}

const TilePort* Tile::find_output(const std::string& location) const {
  for (const auto& p : outputs)
    if (p.location == location) return &p;
  return nullptr;
}

std::vector<std::string> Tile::weight_keys() const {
  if (accepting()) return {kSelf};
  std::vector<std::string> keys;
  for (const auto& p : outputs) keys.push_back(p.location);
  return keys;
}

void Tile::check() const {
  const std::string where = "tile '" + name + "': ";
  if (body.locations.empty()) fail(ErrorKind::Invalid, where + "no locations");
  if (inputs.empty()) fail(ErrorKind::Invalid, where + "no input location");
  if (accepting() && !outputs.empty()) fail(ErrorKind::Invalid, where + "accepting tiles cannot have outputs");
  std::set<std::string> seen;
  for (const auto* ports : {&inputs, &outputs})
    for (const auto& p : *ports) {
      if (!body.find_location(p.location)) fail(ErrorKind::Invalid, where + "port '" + p.location + "' is not a location");
      if (!seen.insert(p.location).second) fail(ErrorKind::Invalid, where + "location '" + p.location + "' used by two ports");
      clock_indices(p.resets, body.clocks);
      if (mentions_parameter(p.guard)) fail(ErrorKind::Unsupported, where + "compatibility guards cannot mention the parameter");
      for (const auto& c : p.guard.clauses) clause_zone(c, body.clocks.size());
    }
  TimedAutomaton copy = body;
  copy.initial = 0;
  copy.check_well_formed();
  require_nrt(copy);
  auto keys = weight_keys();
  for (const auto& [k, v] : declared)
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(ErrorKind::Invalid, where + "declared set for unknown key '" + k + "'");
  for (const auto& [k, v] : weight)
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(ErrorKind::Invalid, where + "weight for unknown key '" + k + "'");
  for (const auto& [loc, v] : location_cost)
    if (!body.find_location(loc)) fail(ErrorKind::Invalid, where + "cost for unknown location '" + loc + "'");
  for (const auto& [e, v] : edge_cost) {
    auto s = body.find_location(e.first), d = body.find_location(e.second);
    if (!s || !d || std::none_of(body.transitions.begin(), body.transitions.end(),
                                 [&](const Transition& t) { return t.src == *s && t.dst == *d; }))
      fail(ErrorKind::Invalid, where + "cost for missing edge " + e.first + " -> " + e.second);
  }
}

Tile elementary_tile(std::int64_t n, Cmp cmp, bool swapped) {
  if (n < 0) fail(ErrorKind::Invalid, "elementary tile constant must be a natural");
  if (cmp == Cmp::Eq) fail(ErrorKind::Invalid, "elementary tiles use <, <=, >= or >");
  static const char* names[] = {"lt", "le", "eq", "ge", "gt"};
  Tile t;
  t.name = std::string(swapped ? "swap_" : "elem_") + names[static_cast<int>(cmp)] + "_" + std::to_string(n);
  auto& b = t.body;
  b.clocks = {"x", "y"};
  b.parameter = "mu";
  const std::size_t first = swapped ? 0 : 1, second = swapped ? 1 : 0;  // entry-reset clock, then the other
  for (const char* l : {"q0", "q1", "q2"}) b.add_location(l);
  Transition t0;
  t0.src = 0;
  t0.dst = 1;
  t0.guard = Guard::atom(Atom{first, Cmp::Eq, true, Rational(0)});
  t0.resets = {second};
  Transition t1;
  t1.src = 1;
  t1.dst = 2;
  t1.guard = Guard::atom(Atom{second, Cmp::Eq, true, Rational(0)}).conj(Guard::atom(Atom{first, cmp, false, Rational(n)}));
  b.transitions = {t0, t1};
  t.inputs.push_back(TilePort{"q0", Guard::top(), {b.clocks[first]}});
  t.outputs.push_back(TilePort{"q2", Guard::top(), {}});
  const Rational half(n, 2);
  Interval i;
  switch (cmp) {
    case Cmp::Lt: i = Interval{Rational(0), false, false, half, false}; break;
    case Cmp::Le: i = Interval{Rational(0), false, false, half, true}; break;
    case Cmp::Ge: i = Interval::above(half, n > 0); break;
    default: i = Interval::above(half, false); break;
  }
  t.declared["q2"] = IntervalSet::of(i);
  return t;
}

std::optional<std::size_t> TiledTA::find(const std::string& id) const {
  for (std::size_t i = 0; i < tiles.size(); ++i)
    if (tiles[i].id == id) return i;
  return std::nullopt;
}

std::size_t TiledTA::size() const {
  std::size_t n = connections.size();
  for (const auto& t : tiles) n += t.tile.body.locations.size() + t.tile.body.transitions.size();
  return n;
}

void TiledTA::check() const {
  if (tiles.empty()) fail(ErrorKind::Invalid, "tiled automaton has no tiles");
  if (initial >= tiles.size()) fail(ErrorKind::Invalid, "initial tile out of range");
  std::set<std::string> ids;
  std::optional<std::string> param;
  for (const auto& t : tiles) {
    if (!ids.insert(t.id).second) fail(ErrorKind::Invalid, "duplicate tile id '" + t.id + "'");
    t.tile.check();
    if (t.tile.body.parameter) {
      if (param && *param != *t.tile.body.parameter) fail(ErrorKind::Unsupported, "tiles use different parameter names");
      param = t.tile.body.parameter;
    }
    if (ceil_constant(t.tile.body) > ambient_c)
      fail(ErrorKind::Invalid, "tile '" + t.id + "' uses constants above the ambient C = " + std::to_string(ambient_c));
  }
  const Tile& first = tiles[initial].tile;
  std::vector<Rational> zero(first.body.clocks.size(), Rational(0));
  if (!holds(first.input().guard, zero, std::nullopt))
    fail(ErrorKind::Invalid, "input guard of the initial tile does not hold when all clocks are zero");
  for (const auto& c : connections) {
    if (c.src >= tiles.size() || c.dst >= tiles.size()) fail(ErrorKind::Invalid, "connection references a missing tile");
    const auto& from = tiles[c.src];
    const auto& to = tiles[c.dst];
    if (from.tile.accepting()) fail(ErrorKind::Invalid, "accepting tile '" + from.id + "' cannot have outgoing connections");
    if (auto why = connection_problem(from.tile, c.output, to.tile, c.input))
      fail(ErrorKind::Invalid, "connection " + port_name(from.id, c.output) + " -> " + port_name(to.id, c.input) + ": " + *why);
  }
}

bool validate_connection(const Tile& from, const std::string& output, const Tile& to, const std::string& input) {
  const TilePort& out = require_output(from, output);
  const TilePort& in = require_input(to, input);
  auto clocks = union_clocks(from, to);
  return implies(remap(out.guard, from.body.clocks, clocks), remap(in.guard, to.body.clocks, clocks), clocks.size());
}

std::optional<std::string> connection_problem(const Tile& from, const std::string& output, const Tile& to,
                                              const std::string& input) {
  if (!validate_connection(from, output, to, input)) return "output guard does not imply the input guard";
  const TilePort& out = require_output(from, output);
  const TilePort& in = require_input(to, input);
  if (!from.body.parameter && !to.body.parameter) return std::nullopt;
  std::set<std::string> resets(out.resets.begin(), out.resets.end());
  resets.insert(in.resets.begin(), in.resets.end());
  for (auto c : clocks_of(out.guard))
    if (resets.count(from.body.clocks[c])) return "clock '" + from.body.clocks[c] + "' is tested and reset";
  return std::nullopt;
}

Flattening flatten_with_map(const TiledTA& tta) {
  tta.check();
  Flattening f;
  TimedAutomaton& ta = f.ta;
  for (const auto& inst : tta.tiles) {
    for (const auto& c : inst.tile.body.clocks) ta.add_clock(c);
    if (inst.tile.body.parameter) ta.parameter = inst.tile.body.parameter;
  }
  std::vector<std::size_t> base;
  for (std::size_t i = 0; i < tta.tiles.size(); ++i) {
    const Tile& tile = tta.tiles[i].tile;
    base.push_back(ta.locations.size());
    const bool accepting = tile.accepting();
    for (const auto& l : tile.body.locations) {
      ta.add_location(port_name(tta.tiles[i].id, l.name), accepting && l.accepting);
      f.owner.push_back(i);
    }
    for (const auto& t : tile.body.transitions) {
      Transition n = t;
      n.src += base[i];
      n.dst += base[i];
      n.guard = remap(t.guard, tile.body.clocks, ta.clocks);
      std::vector<std::string> names;
      for (auto r : t.resets) names.push_back(tile.body.clocks[r]);
      n.resets = clock_indices(names, ta.clocks);
      ta.transitions.push_back(std::move(n));
      f.connection.push_back(std::nullopt);
    }
  }
  for (std::size_t k = 0; k < tta.connections.size(); ++k) {
    const auto& c = tta.connections[k];
    const Tile& from = tta.tiles[c.src].tile;
    const Tile& to = tta.tiles[c.dst].tile;
    const TilePort& out = require_output(from, c.output);
    const TilePort& in = require_input(to, c.input);
    Transition t;
    t.src = base[c.src] + *from.body.find_location(c.output);
    t.dst = base[c.dst] + *to.body.find_location(c.input);
    t.guard = remap(out.guard, from.body.clocks, ta.clocks);
    std::vector<std::string> names = out.resets;
    names.insert(names.end(), in.resets.begin(), in.resets.end());
    t.resets = clock_indices(names, ta.clocks);
    t.letter = c.letter;
    ta.transitions.push_back(std::move(t));
    f.connection.push_back(k);
  }
  const Tile& first = tta.tiles[tta.initial].tile;
  ta.initial = base[tta.initial] + *first.body.find_location(first.input().location);
  ta.check_well_formed();
  return f;
}

TimedAutomaton flatten(const TiledTA& tta) { return flatten_with_map(tta).ta; }

ParametricTA parameter_probe(const Tile& tile, const std::string& key, const ProbeOptions& options) {
  tile.check();
  TimedAutomaton ta = tile.body;
  if (!ta.parameter) ta.parameter = "mu";
  const TilePort& in = tile.input();
  const std::size_t input = *ta.find_location(in.location);
  ta.initial = input;
  if (key == kSelf) {
    if (!tile.accepting()) fail(ErrorKind::Invalid, "tile '" + tile.name + "' is not accepting");
  } else {
    const TilePort& out = require_output(tile, key);
    for (auto& l : ta.locations) l.accepting = false;
    const std::size_t exit = ta.add_location("probe.exit", true);
    Transition leave;
    leave.src = *ta.find_location(out.location);
    leave.dst = exit;
    leave.guard = out.guard;
    ta.transitions.push_back(leave);
    Transition loop;
    loop.src = exit;
    loop.dst = exit;
    ta.transitions.push_back(loop);
  }
  const auto in_resets = clock_indices(in.resets, ta.clocks);
  std::vector<std::pair<std::size_t, Rational>> targets;
  for (const auto& [name, v] : options.entry) {
    auto c = ta.find_clock(name);
    if (!c) fail(ErrorKind::Invalid, "unknown clock '" + name + "' in entry valuation");
    if (std::binary_search(in_resets.begin(), in_resets.end(), *c)) continue;
    if (v < Rational(0)) fail(ErrorKind::Invalid, "entry valuation must be non-negative");
    targets.emplace_back(*c, v);
  }
  add_entry_gadget(ta, input, in_resets, targets);
  return ParametricTA::from(std::move(ta));
}

IntervalSet compute_parameter_set(const Tile& tile, const std::string& key, std::int64_t ambient_c,
                                  const ProbeOptions& options) {
  ParametricTA probe = parameter_probe(tile, key, options);
  const std::int64_t c = std::max(ambient_c, ceil_constant(probe.ta()));
  const Representatives reps = compute_representatives(c, probe.ta().locations.size());
  IntervalSet result;
  for (std::size_t i = 0; i < interval_count(ambient_c); ++i)
    if (check_non_par_emptiness(probe, representative(ambient_c, i, reps), options.buchi).nonempty)
      result = result.unite(IntervalSet::of(canonical_interval(ambient_c, i)));
  return result;
}

bool check_productive(const Tile& tile, const std::map<std::string, BitWord>& declared, std::int64_t ambient_c) {
  for (const auto& key : tile.weight_keys()) {
    auto it = declared.find(key);
    if (it == declared.end() || it->second.none()) return false;
    if (!(intervals_to_bits(compute_parameter_set(tile, key, ambient_c), ambient_c) == it->second)) return false;
  }
  return true;
}

WeightFunction declared_weights(const TiledTA& tta) {
  WeightFunction w;
  for (std::size_t i = 0; i < tta.tiles.size(); ++i) {
    const Tile& t = tta.tiles[i].tile;
    for (const auto& key : t.weight_keys()) {
      auto it = t.declared.find(key);
      if (it == t.declared.end())
        fail(ErrorKind::Invalid, "tile '" + tta.tiles[i].id + "' declares no parameter set for '" + key + "'");
      w[{i, key}] = intervals_to_bits(it->second, tta.ambient_c);
    }
  }
  return w;
}

WeightedAutomaton<BitSemiring> underlying_wa(const TiledTA& tta, const WeightFunction& weights) {
  WeightedAutomaton<BitSemiring> wa(BitSemiring{interval_count(tta.ambient_c)});
  for (const auto& t : tta.tiles) wa.add_state(t.id);
  wa.set_initial(tta.initial);
  auto weight = [&](std::size_t tile, const std::string& key) {
    auto it = weights.find({tile, key});
    if (it == weights.end()) fail(ErrorKind::Invalid, "no weight for " + port_name(tta.tiles[tile].id, key));
    if (it->second.size() != wa.semiring().k) fail(ErrorKind::Invalid, "weight length does not match the ambient C");
    return it->second;
  };
  for (const auto& c : tta.connections) wa.add_transition(c.src, c.letter, c.dst, weight(c.src, c.output));
  for (std::size_t i = 0; i < tta.tiles.size(); ++i)
    if (tta.is_accepting(i)) wa.set_final(i, weight(i, kSelf));
  return wa;
}

}  // namespace tta

#include "tta/priced.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "tta/error.hpp"
#include "tta/text_format.hpp"
#include "tta/weighted.hpp"

namespace tta {

namespace {

std::uint64_t parse_natural(const std::string& s, int line) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ": expected a natural number, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ": number out of range");
  }
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) fail(ErrorKind::Limit, "cost overflow");
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) fail(ErrorKind::Limit, "cost overflow");
  return a * b;
}

std::uint64_t lookup(const std::map<std::string, std::uint64_t>& m, const std::string& k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

std::uint64_t lookup(const std::map<std::pair<std::string, std::string>, std::uint64_t>& m, const std::string& a,
                     const std::string& b) {
  auto it = m.find({a, b});
  return it == m.end() ? 0 : it->second;
}

}  // namespace

std::uint64_t PricedTA::cost_of(std::size_t src, std::size_t dst) const {
  auto it = edge_cost.find({src, dst});
  return it == edge_cost.end() ? 0 : it->second;
}

void PricedTA::check() const {
  base.check_well_formed();
  if (location_cost.size() != base.locations.size()) fail(ErrorKind::Invalid, "one location cost per location is required");
  for (const auto& [pair, cost] : edge_cost) {
    (void)cost;
    if (pair.first >= base.locations.size() || pair.second >= base.locations.size())
      fail(ErrorKind::Invalid, "edge cost on a missing location");
  }
}

PricedTA parse_priced_ta(const std::string& text) {
  struct CostLine {
    int line;
    std::vector<std::string> words;
  };
  std::vector<CostLine> costs;
  std::ostringstream rest;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::istringstream words(raw.substr(0, raw.find('#')));
    std::vector<std::string> w;
    for (std::string x; words >> x;) w.push_back(x);
    if (!w.empty() && w[0] == "cost") {
      costs.push_back({number, w});
      rest << "\n";  // keeps line numbers of later errors
    } else {
      rest << raw << "\n";
    }
  }
  PricedTA p;
  p.base = parse_ta(rest.str());
  p.location_cost.assign(p.base.locations.size(), 0);
  auto loc = [&](const std::string& name, int line) {
    auto l = p.base.find_location(name);
    if (!l) fail(ErrorKind::Parse, "line " + std::to_string(line) + ": unknown location '" + name + "'");
    return *l;
  };
  for (const auto& c : costs) {
    if (c.words.size() == 4 && c.words[1] == "location") {
      p.location_cost[loc(c.words[2], c.line)] = parse_natural(c.words[3], c.line);
    } else if (c.words.size() == 5 && c.words[1] == "edge") {
      std::size_t a = loc(c.words[2], c.line), b = loc(c.words[3], c.line);
      bool exists = std::any_of(p.base.transitions.begin(), p.base.transitions.end(),
                                [&](const Transition& t) { return t.src == a && t.dst == b; });
      if (!exists) fail(ErrorKind::Parse, "line " + std::to_string(c.line) + ": no edge " + c.words[2] + " -> " + c.words[3]);
      p.edge_cost[{a, b}] = parse_natural(c.words[4], c.line);
    } else {
      fail(ErrorKind::Parse, "line " + std::to_string(c.line) + ": expected cost location <loc> <n> or cost edge <src> <dst> <n>");
    }
  }
  p.check();
  return p;
}

PricedTA load_priced_ta(const std::string& path) { return parse_priced_ta(detail::read_file(path)); }

std::string write_priced_ta(const PricedTA& p) {
  p.check();
  std::string out = write_ta(p.base);
  for (std::size_t i = 0; i < p.location_cost.size(); ++i)
    if (p.location_cost[i] != 0) out += "cost location " + p.base.locations[i].name + " " + std::to_string(p.location_cost[i]) + "\n";
  for (const auto& [pair, cost] : p.edge_cost)
    out += "cost edge " + p.base.locations[pair.first].name + " " + p.base.locations[pair.second].name + " " +
           std::to_string(cost) + "\n";
  return out;
}

Rational run_cost(const PricedTA& pta, const TimedRun& run) {
  pta.check();
  const auto& ta = pta.base;
  const auto& s = run.steps;
  if (s.size() < 2) fail(ErrorKind::Invalid, "a run needs at least two configurations");
  if (s[0].first != ta.initial) fail(ErrorKind::Invalid, "run must start in the initial location");
  if (s[0].second != Rational(0)) fail(ErrorKind::Invalid, "run must start at time 0");
  // Every valuation some choice of transitions can produce so far.
  std::set<std::vector<Rational>> current{std::vector<Rational>(ta.clocks.size(), Rational(0))};
  Rational cost(0);
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const auto [q, t] = s[k];
    const auto [q2, t2] = s[k + 1];
    if (q >= ta.locations.size() || q2 >= ta.locations.size()) fail(ErrorKind::Invalid, "run visits a missing location");
    if (!(t < t2)) fail(ErrorKind::Invalid, "run timestamps must strictly increase");
    const Rational delay = t2 - t;
    std::set<std::vector<Rational>> next;
    for (const auto& v : current) {
      std::vector<Rational> moved = v;
      for (auto& x : moved) x = x + delay;
      for (const auto& tr : ta.transitions) {
        if (tr.src != q || tr.dst != q2 || !holds(tr.guard, moved, std::nullopt)) continue;
        std::vector<Rational> after = moved;
        for (auto r : tr.resets) after[r] = Rational(0);
        next.insert(after);
      }
    }
    if (next.empty())
      fail(ErrorKind::Invalid, "no transition takes " + ta.locations[q].name + " to " + ta.locations[q2].name +
                                   " after " + delay.str() + " time units");
    current = std::move(next);
    cost = cost + Rational(static_cast<std::int64_t>(pta.location_cost[q])) * delay +
           Rational(static_cast<std::int64_t>(pta.cost_of(q, q2)));
  }
  return cost;
}

std::uint64_t tile_weight_elementary(const Tile& tile, std::uint64_t alpha) {
  auto mismatch = [&](const std::string& why) -> std::uint64_t {
    fail(ErrorKind::Invalid, "tile '" + tile.name + "' is not a two-location priced template: " + why);
  };
  const auto& body = tile.body;
  if (alpha == 0) return mismatch("alpha must be positive");
  if (body.locations.size() != 2 || tile.inputs.size() != 1) return mismatch("needs two locations and one input");
  if (body.parameter) return mismatch("parametric");
  const TilePort& in = tile.input();
  if (in.resets.size() != 1 || !in.guard.is_true()) return mismatch("input must reset one clock and have guard true");
  const auto x = body.find_clock(in.resets[0]);
  if (!x) return mismatch("input resets an unknown clock");
  const std::size_t q0 = *body.find_location(in.location);
  const std::size_t q1 = 1 - q0;
  const std::string& out_name = body.locations[q1].name;
  const Rational a(static_cast<std::int64_t>(alpha));
  const Clause inside{Atom{*x, Cmp::Gt, false, Rational(0)}, Atom{*x, Cmp::Lt, false, a}};
  auto same = [](Clause c, Clause d) {
    auto key = [](const Atom& t) { return std::make_tuple(t.clock, static_cast<int>(t.cmp), t.constant); };
    auto less = [&](const Atom& l, const Atom& r) { return key(l) < key(r); };
    std::sort(c.begin(), c.end(), less);
    std::sort(d.begin(), d.end(), less);
    return c == d;
  };
  std::size_t edges = 0;
  for (const auto& t : body.transitions) {
    if (t.src == q0 && t.dst == q1 && t.guard.clauses.size() == 1 && same(t.guard.clauses[0], inside) && t.resets.empty())
      ++edges;
    else if (!(t.src == q1 && t.dst == q1))
      return mismatch("unexpected edge");
  }
  if (edges != 1) return mismatch("needs exactly one edge q0 -> q1 with 0 < x < alpha");
  if (!tile.accepting()) {
    const TilePort* out = tile.find_output(out_name);
    if (!out || tile.outputs.size() != 1) return mismatch("needs its single output at q1");
    if (!out->resets.empty() || out->guard.clauses.size() != 1 || !same(out->guard.clauses[0], Clause{Atom{*x, Cmp::Eq, false, a}}))
      return mismatch("output must require x == alpha without resets");
  }
  const std::uint64_t p = std::min(lookup(tile.location_cost, in.location), lookup(tile.location_cost, out_name));
  return checked_add(checked_mul(alpha, p), lookup(tile.edge_cost, in.location, out_name));
}

Tile priced_elementary_tile(const std::string& name, std::uint64_t alpha, std::uint64_t c_q0, std::uint64_t c_q1,
                            std::uint64_t c_t0, bool accepting) {
  if (alpha == 0) fail(ErrorKind::Invalid, "alpha must be positive");
  Tile t;
  t.name = name;
  t.body.add_clock("x");
  t.body.add_location("q0");
  t.body.add_location("q1", accepting);
  const Rational a(static_cast<std::int64_t>(alpha));
  Transition e;
  e.src = 0;
  e.dst = 1;
  e.guard = Guard{{Clause{Atom{0, Cmp::Gt, false, Rational(0)}, Atom{0, Cmp::Lt, false, a}}}};
  t.body.transitions.push_back(e);
  if (accepting) {
    Transition loop;
    loop.src = 1;
    loop.dst = 1;
    t.body.transitions.push_back(loop);
  }
  t.inputs.push_back(TilePort{"q0", Guard::top(), {"x"}});
  if (!accepting) t.outputs.push_back(TilePort{"q1", Guard::atom(Atom{0, Cmp::Eq, false, a}), {}});
  t.location_cost = {{"q0", c_q0}, {"q1", c_q1}};
  t.edge_cost = {{{"q0", "q1"}, c_t0}};
  if (accepting)
    t.weight[kSelf] = c_t0;
  else
    t.weight["q1"] = tile_weight_elementary(t, alpha);
  return t;
}

WeightedAutomaton<PriceSemiring> priced_wa(const TiledTA& tta) {
  tta.check();
  WeightedAutomaton<PriceSemiring> wa;
  for (const auto& t : tta.tiles) wa.add_state(t.id);
  wa.set_initial(tta.initial);
  auto weight = [&](std::size_t tile, const std::string& key) {
    const auto& w = tta.tiles[tile].tile.weight;
    auto it = w.find(key);
    if (it == w.end()) fail(ErrorKind::Invalid, "tile '" + tta.tiles[tile].id + "' declares no weight for " + key);
    return it->second;
  };
  const PriceSemiring s;
  for (const auto& c : tta.connections)
    wa.add_transition(c.src, c.letter, c.dst, s.times(Price::of(weight(c.src, c.output)), Price::of(c.cost)));
  for (std::size_t i = 0; i < tta.tiles.size(); ++i)
    if (tta.is_accepting(i)) wa.set_final(i, Price::of(weight(i, kSelf)));
  return wa;
}

Price priced_oracle(const TiledTA& tta) { return shortest_distance(priced_wa(tta)); }

Price min_cost_brute(const TiledTA& tta) {
  tta.check();
  auto weight = [&](std::size_t tile, const std::string& key) {
    const auto& w = tta.tiles[tile].tile.weight;
    auto it = w.find(key);
    if (it == w.end()) fail(ErrorKind::Invalid, "tile '" + tta.tiles[tile].id + "' declares no weight for " + key);
    return it->second;
  };
  Price best = Price::inf();
  std::vector<char> on_path(tta.tiles.size(), 0);
  std::function<void(std::size_t, std::uint64_t)> walk = [&](std::size_t tile, std::uint64_t sum) {
    if (tta.is_accepting(tile)) {
      best = std::min(best, Price::of(checked_add(sum, weight(tile, kSelf))));
      return;
    }
    on_path[tile] = 1;
    for (const auto& c : tta.connections)
      if (c.src == tile && !on_path[c.dst]) walk(c.dst, checked_add(checked_add(sum, weight(tile, c.output)), c.cost));
    on_path[tile] = 0;
  };
  walk(tta.initial, 0);
  return best;
}

PricedTA flatten_priced(const TiledTA& tta) {
  Flattening f = flatten_with_map(tta);
  PricedTA p;
  p.location_cost.assign(f.ta.locations.size(), 0);
  std::vector<std::size_t> base(tta.tiles.size(), 0);
  for (std::size_t l = f.ta.locations.size(); l-- > 0;) base[f.owner[l]] = l;
  for (std::size_t i = 0; i < tta.tiles.size(); ++i) {
    const Tile& t = tta.tiles[i].tile;
    for (std::size_t l = 0; l < t.body.locations.size(); ++l)
      p.location_cost[base[i] + l] = lookup(t.location_cost, t.body.locations[l].name);
    for (const auto& [pair, cost] : t.edge_cost) {
      auto a = t.body.find_location(pair.first), b = t.body.find_location(pair.second);
      if (!a || !b) fail(ErrorKind::Invalid, "tile '" + t.name + "' prices a missing location");
      p.edge_cost[{base[i] + *a, base[i] + *b}] = cost;
    }
  }
  for (std::size_t k = 0; k < f.ta.transitions.size(); ++k) {
    if (!f.connection[k]) continue;
    const auto& tr = f.ta.transitions[k];
    const std::uint64_t cost = tta.connections[*f.connection[k]].cost;
    auto [it, fresh] = p.edge_cost.emplace(std::make_pair(tr.src, tr.dst), cost);
    if (!fresh && it->second != cost) fail(ErrorKind::Unsupported, "parallel connections with different costs");
  }
  p.base = std::move(f.ta);
  p.check();
  return p;
}

TiledTA generate_priced_tta(std::uint64_t seed, std::size_t max_tiles) {
  if (max_tiles < 1) fail(ErrorKind::Invalid, "max_tiles must be at least 1");
  std::mt19937_64 rng(seed);
  auto draw = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };
  const std::size_t n = static_cast<std::size_t>(draw(1, max_tiles));
  TiledTA tta;
  std::int64_t c = 0;
  auto make = [&](std::size_t i, bool accepting) {
    const std::uint64_t alpha = draw(1, 3);
    c = std::max<std::int64_t>(c, static_cast<std::int64_t>(alpha));
    return TileInstance{"T" + std::to_string(i),
                        priced_elementary_tile(accepting ? "pacc" : "ptile", alpha, draw(0, 5), draw(0, 5), draw(0, 6), accepting)};
  };
  std::vector<std::size_t> open;  // non-accepting tiles
  tta.tiles.push_back(make(0, n == 1 ? rng() % 2 == 0 : false));
  if (!tta.tiles[0].tile.accepting()) open.push_back(0);
  for (std::size_t i = 1; i < n && !open.empty(); ++i) {
    const std::size_t parent = open[rng() % open.size()];
    const bool accepting = rng() % 5 < 2;
    tta.tiles.push_back(make(i, accepting));
    TileTransition t;
    t.src = parent;
    t.output = "q1";
    t.dst = i;
    t.input = "q0";
    t.cost = draw(0, 4);
    tta.connections.push_back(t);
    if (!accepting) open.push_back(i);
  }
  // Extra connections between existing tiles, possibly back to earlier ones.
  for (std::size_t extra = rng() % 3; extra > 0 && !open.empty() && tta.tiles.size() > 1; --extra) {
    TileTransition t;
    t.src = open[rng() % open.size()];
    t.output = "q1";
    t.dst = rng() % tta.tiles.size();
    t.input = "q0";
    t.cost = draw(0, 4);
    bool duplicate = std::any_of(tta.connections.begin(), tta.connections.end(),
                                 [&](const TileTransition& o) { return o.src == t.src && o.dst == t.dst; });
    if (!duplicate) tta.connections.push_back(t);
  }
  tta.ambient_c = c;
  tta.check();
  return tta;
}

}  // namespace tta

#include "tta/emptiness.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "graph.hpp"
#include "tta/dbm.hpp"

namespace tta {

// ==================================================================
// Witness text form
// ==================================================================

namespace {

std::string steps_str(const std::vector<WitnessStep>& steps) {
  std::string s;
  for (const auto& st : steps) {
    s += " t" + std::to_string(st.transition);
    if (st.clause != 0) s += "." + std::to_string(st.clause);
  }
  return s;
}

std::vector<WitnessStep> parse_steps(const std::string& text) {
  std::vector<WitnessStep> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2 || tok[0] != 't') fail(ErrorKind::Parse, "bad witness step '" + tok + "'");
    WitnessStep st;
    std::size_t dot = tok.find('.');
    try {
      st.transition = std::stoul(tok.substr(1, dot == std::string::npos ? std::string::npos : dot - 1));
      if (dot != std::string::npos) st.clause = std::stoul(tok.substr(dot + 1));
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "bad witness step '" + tok + "'");
    }
    out.push_back(st);
  }
  return out;
}

}  // namespace

std::string Witness::str() const { return "prefix:" + steps_str(prefix) + " / cycle:" + steps_str(cycle); }

Witness Witness::parse(const std::string& text) {
  const std::string p = "prefix:";
  std::size_t a = text.find(p);
  std::size_t slash = text.find("/ cycle:");
  if (a == std::string::npos || slash == std::string::npos || slash < a)
    fail(ErrorKind::Parse, "witness must look like 'prefix: ... / cycle: ...'");
  Witness w;
  w.prefix = parse_steps(text.substr(a + p.size(), slash - a - p.size()));
  w.cycle = parse_steps(text.substr(slash + 8));
  if (w.cycle.empty()) fail(ErrorKind::Parse, "witness cycle is empty");
  return w;
}

Witness normalize_lasso(Witness w) {
  if (w.cycle.empty()) return w;
  while (!w.prefix.empty() && w.prefix.back() == w.cycle.back()) {
    w.prefix.pop_back();
    std::rotate(w.cycle.rbegin(), w.cycle.rbegin() + 1, w.cycle.rend());
  }
  const std::size_t n = w.cycle.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = w.cycle[i] == w.cycle[i % p];
    if (periodic) {
      w.cycle.resize(p);
      break;
    }
  }
  return w;
}

// ==================================================================
// Zone graph
// ==================================================================
//
// Nodes are (location, flag, zone). An extra clock `t` measures time since the last tick; a
// tick is a transition taken with t >= T that resets t and raises the flag. A node is accepting
// when its location is accepting and the flag is up; leaving such a node lowers the flag. Every
// cycle through an accepting node therefore lets at least T time units pass, which rules out
// Zeno lassos. Ticks are only offered on transitions inside a cycle of the location graph, and t
// is reset on all other transitions.

namespace {

struct Edge {
  std::uint32_t to;
  std::uint32_t transition;
  std::uint32_t clause;
};

struct Node {
  std::uint32_t location;
  bool flag;
  Dbm zone;
};

bool apply_clause(Dbm& z, const Clause& clause) {
  for (const auto& a : clause) {
    std::size_t i = a.clock + 1;
    std::int64_t c = a.constant.num();
    switch (a.cmp) {
      case Cmp::Lt: z.constrain(i, 0, bound(c, true)); break;
      case Cmp::Le: z.constrain(i, 0, bound(c, false)); break;
      case Cmp::Eq:
        z.constrain(i, 0, bound(c, false));
        z.constrain(0, i, bound(-c, false));
        break;
      case Cmp::Ge: z.constrain(0, i, bound(-c, false)); break;
      case Cmp::Gt: z.constrain(0, i, bound(-c, true)); break;
    }
    if (z.is_empty()) return false;
  }
  return true;
}

class ZoneGraph {
 public:
  ZoneGraph(const TimedAutomaton& ta, std::vector<std::int64_t> lower, std::vector<std::int64_t> upper,
            std::size_t max_nodes)
      : ta_(ta), lower_(std::move(lower)), upper_(std::move(upper)), max_nodes_(max_nodes),
        tick_(ta.clocks.size() + 1) {
    // transitions inside a cycle of the location graph
    std::vector<std::vector<std::uint32_t>> loc_adj(ta.locations.size());
    for (const auto& t : ta.transitions) loc_adj[t.src].push_back(static_cast<std::uint32_t>(t.dst));
    auto sccs = detail::tarjan(loc_adj, [](std::uint32_t v) { return v; });
    in_cycle_.resize(ta.transitions.size());
    outgoing_.resize(ta.locations.size());
    for (std::size_t i = 0; i < ta.transitions.size(); ++i) {
      const auto& t = ta.transitions[i];
      in_cycle_[i] = sccs.component[t.src] == sccs.component[t.dst];
      outgoing_[t.src].push_back(i);
    }
  }

  void explore() {
    Dbm init = Dbm::zero(ta_.clocks.size() + 1);
    init.up();
    init.extrapolate_lu(lower_, upper_);
    intern(static_cast<std::uint32_t>(ta_.initial), false, std::move(init));
    for (std::size_t n = 0; n < nodes_.size(); ++n) expand(static_cast<std::uint32_t>(n));
  }

  std::optional<Witness> find_lasso() const {
    auto sccs = detail::tarjan(adj_, [](const Edge& e) { return e.to; });
    std::vector<bool> nontrivial(sccs.count, false);
    for (std::size_t v = 0; v < adj_.size(); ++v)
      for (const auto& e : adj_[v])
        if (sccs.component[v] == sccs.component[e.to]) nontrivial[sccs.component[v]] = true;
    for (std::uint32_t v = 0; v < nodes_.size(); ++v) {
      if (!accepting(v) || !nontrivial[sccs.component[v]]) continue;
      Witness w;
      w.prefix = path(0, v, nullptr, 0);
      w.cycle = path(v, v, &sccs.component, sccs.component[v]);
      return normalize_lasso(std::move(w));
    }
    return std::nullopt;
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& a : adj_) e += a.size();
    return e;
  }

 private:
  bool accepting(std::uint32_t v) const { return nodes_[v].flag && ta_.locations[nodes_[v].location].accepting; }

  std::uint32_t intern(std::uint32_t loc, bool flag, Dbm zone) {
    std::size_t h = zone.hash() ^ (static_cast<std::size_t>(loc) * 0x100000001b3ULL) ^ (flag ? 0x5bd1e995ULL : 0);
    auto& bucket = index_[h];
    for (auto id : bucket)
      if (nodes_[id].location == loc && nodes_[id].flag == flag && nodes_[id].zone == zone) return id;
    if (max_nodes_ != 0 && nodes_.size() >= max_nodes_)
      fail(ErrorKind::Limit, "zone graph exceeds " + std::to_string(max_nodes_) + " nodes");
    nodes_.push_back(Node{loc, flag, std::move(zone)});
    adj_.emplace_back();
    auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
    bucket.push_back(id);
    return id;
  }

  void expand(std::uint32_t v) {
    const std::uint32_t loc = nodes_[v].location;
    const bool base_flag = accepting(v) ? false : nodes_[v].flag;
    for (std::size_t ti : outgoing_[loc]) {
      const auto& t = ta_.transitions[ti];
      for (std::size_t ci = 0; ci < t.guard.clauses.size(); ++ci) {
        Dbm guarded = nodes_[v].zone;
        if (!apply_clause(guarded, t.guard.clauses[ci])) continue;
        if (in_cycle_[ti]) {
          successor(v, guarded, t, ti, ci, base_flag, false);
          Dbm ticked = guarded;
          if (ticked.constrain(0, tick_, bound(-lower_[tick_], false))) successor(v, ticked, t, ti, ci, true, true);
        } else {
          successor(v, guarded, t, ti, ci, base_flag, true);
        }
      }
    }
  }

  void successor(std::uint32_t v, Dbm z, const Transition& t, std::size_t ti, std::size_t ci, bool flag,
                 bool reset_tick) {
    for (auto r : t.resets) z.reset(r + 1);
    if (reset_tick) z.reset(tick_);
    z.up();
    z.extrapolate_lu(lower_, upper_);
    std::uint32_t to = intern(static_cast<std::uint32_t>(t.dst), flag, std::move(z));
    adj_[v].push_back(Edge{to, static_cast<std::uint32_t>(ti), static_cast<std::uint32_t>(ci)});
  }

  // Shortest non-empty path (when from == to) or shortest path, optionally inside one SCC.
  std::vector<WitnessStep> path(std::uint32_t from, std::uint32_t to, const std::vector<std::uint32_t>* comp,
                                std::uint32_t c) const {
    if (from == to && comp == nullptr) return {};
    constexpr std::uint32_t none = UINT32_MAX;
    std::vector<std::uint32_t> parent(nodes_.size(), none);
    std::vector<const Edge*> via(nodes_.size(), nullptr);
    std::deque<std::uint32_t> queue{from};
    const Edge* closing = nullptr;
    std::uint32_t closing_from = none;
    while (!queue.empty() && closing == nullptr) {
      std::uint32_t u = queue.front();
      queue.pop_front();
      for (const auto& e : adj_[u]) {
        if (comp && (*comp)[e.to] != c) continue;
        if (e.to == to) {
          closing = &e;
          closing_from = u;
          break;
        }
        if (e.to == from || parent[e.to] != none) continue;
        parent[e.to] = u;
        via[e.to] = &e;
        queue.push_back(e.to);
      }
    }
    if (closing == nullptr) fail(ErrorKind::Internal, "lasso reconstruction failed");
    std::vector<WitnessStep> steps{{closing->transition, closing->clause}};
    for (std::uint32_t u = closing_from; u != from; u = parent[u]) steps.push_back({via[u]->transition, via[u]->clause});
    std::reverse(steps.begin(), steps.end());
    return steps;
  }

  const TimedAutomaton& ta_;
  std::vector<std::int64_t> lower_, upper_;  // extrapolation bounds per DBM index
  std::size_t max_nodes_;
  std::size_t tick_;
  std::vector<bool> in_cycle_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::vector<Node> nodes_;
  std::vector<std::vector<Edge>> adj_;
  std::unordered_map<std::size_t, std::vector<std::uint32_t>> index_;
};

// Some accepting location must sit on a cycle reachable from the initial location.
bool accepting_cycle_possible(const TimedAutomaton& ta) {
  std::vector<std::vector<std::uint32_t>> adj(ta.locations.size());
  for (const auto& t : ta.transitions)
    if (!t.guard.is_false()) adj[t.src].push_back(static_cast<std::uint32_t>(t.dst));
  auto sccs = detail::tarjan(adj, [](std::uint32_t v) { return v; });
  std::vector<bool> reach(ta.locations.size(), false);
  std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(ta.initial)};
  reach[ta.initial] = true;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : adj[v])
      if (!reach[w]) {
        reach[w] = true;
        stack.push_back(w);
      }
  }
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (!reach[v] || !ta.locations[v].accepting) continue;
    for (std::size_t u = 0; u < adj.size(); ++u)
      for (auto w : adj[u])
        if (sccs.component[u] == sccs.component[v] && sccs.component[w] == sccs.component[v]) return true;
  }
  return false;
}

}  // namespace

BuchiResult buchi_emptiness(const TimedAutomaton& ta, const BuchiOptions& options) {
  ta.check_well_formed();
  if (ta.is_parametric()) fail(ErrorKind::Invalid, "emptiness check needs a non-parametric automaton");
  const std::int64_t largest = max_constant(ta);
  if (options.extrapolation && *options.extrapolation < std::max<std::int64_t>(largest, 1))
    fail(ErrorKind::Invalid, "extrapolation bound below the largest constant");

  BuchiResult r;
  if (!accepting_cycle_possible(ta)) return r;

  // Largest constant each clock is compared with from below (L) and from above (U). The tick
  // clock only appears in t >= T. Any positive T detects divergence; taking the largest constant
  // keeps the number of ticks needed to saturate the other clocks small.
  const std::size_t dim = ta.clocks.size() + 2;
  std::vector<std::int64_t> lower(dim, kNoBound), upper(dim, kNoBound);
  lower[0] = upper[0] = 0;
  for (const auto& t : ta.transitions)
    for (const auto& c : t.guard.clauses)
      for (const auto& a : c) {
        const std::size_t i = a.clock + 1;
        const std::int64_t k = a.constant.num();
        if (a.cmp != Cmp::Lt && a.cmp != Cmp::Le) lower[i] = std::max(lower[i], k);
        if (a.cmp != Cmp::Gt && a.cmp != Cmp::Ge) upper[i] = std::max(upper[i], k);
      }
  lower[dim - 1] = std::max<std::int64_t>(largest, 1);
  if (options.extrapolation)
    for (std::size_t i = 1; i < dim; ++i) lower[i] = upper[i] = *options.extrapolation;
  ZoneGraph g(ta, std::move(lower), std::move(upper), options.max_nodes);
  g.explore();
  r.witness = g.find_lasso();
  r.nonempty = r.witness.has_value();
  r.nodes = g.node_count();
  r.edges = g.edge_count();
  return r;
}

}  // namespace tta

#include "tta/region_oracle.hpp"

#include <algorithm>
#include <map>

#include "graph.hpp"

namespace tta {

namespace {

// Clock value class: integer part (m + 1 stands for "above m") and a fractional rank where 0
// means zero fraction and larger ranks mean larger fractions. Ranks are kept contiguous.
struct Region {
  std::vector<std::int16_t> ipart;
  std::vector<std::int16_t> rank;

  bool operator<(const Region& o) const { return std::tie(ipart, rank) < std::tie(o.ipart, o.rank); }
};

class RegionOps {
 public:
  RegionOps(std::size_t clocks, std::int64_t m) : n_(clocks), m_(static_cast<std::int16_t>(m)) {}

  Region initial() const { return Region{std::vector<std::int16_t>(n_, 0), std::vector<std::int16_t>(n_, 0)}; }
  bool unbounded(const Region& r, std::size_t x) const { return r.ipart[x] > m_; }

  void compact(Region& r) const {
    std::vector<std::int16_t> used;
    for (std::size_t x = 0; x < n_; ++x) {
      if (unbounded(r, x)) r.rank[x] = 0;
      else if (r.rank[x] > 0) used.push_back(r.rank[x]);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (std::size_t x = 0; x < n_; ++x)
      if (!unbounded(r, x) && r.rank[x] > 0)
        r.rank[x] = static_cast<std::int16_t>(std::lower_bound(used.begin(), used.end(), r.rank[x]) - used.begin() + 1);
  }

  // Immediate time successor; returns false when every clock is already above m.
  bool delay(Region& r) const {
    bool any_bounded = false, any_zero = false;
    std::int16_t top = 0;
    for (std::size_t x = 0; x < n_; ++x) {
      if (unbounded(r, x)) continue;
      any_bounded = true;
      if (r.rank[x] == 0) any_zero = true;
      top = std::max(top, r.rank[x]);
    }
    if (!any_bounded) return false;
    if (any_zero) {
      for (std::size_t x = 0; x < n_; ++x) {
        if (unbounded(r, x)) continue;
        if (r.rank[x] > 0) ++r.rank[x];
        else if (r.ipart[x] == m_) r.ipart[x] = static_cast<std::int16_t>(m_ + 1);
        else r.rank[x] = 1;
      }
    } else {
      for (std::size_t x = 0; x < n_; ++x)
        if (!unbounded(r, x) && r.rank[x] == top) {
          ++r.ipart[x];
          r.rank[x] = 0;
        }
    }
    compact(r);
    return true;
  }

  bool satisfies(const Region& r, const Atom& a) const {
    const std::int64_t c = a.constant.num();
    if (unbounded(r, a.clock)) return a.cmp == Cmp::Gt || a.cmp == Cmp::Ge;
    const std::int64_t i = r.ipart[a.clock];
    const bool frac_zero = r.rank[a.clock] == 0;
    const bool lt = i < c;
    const bool le = frac_zero ? i <= c : i < c;
    switch (a.cmp) {
      case Cmp::Lt: return lt;
      case Cmp::Le: return le;
      case Cmp::Eq: return frac_zero && i == c;
      case Cmp::Ge: return !lt;
      case Cmp::Gt: return !le;
    }
    return false;
  }

  void reset(Region& r, std::size_t x) const {
    r.ipart[x] = 0;
    r.rank[x] = 0;
    compact(r);
  }

 private:
  std::size_t n_;
  std::int16_t m_;
};

struct REdge {
  std::uint32_t to;
  bool delay;
  std::uint32_t resets;  // bit mask of reset clocks for action steps
};

struct RegionGraph {
  std::vector<std::uint32_t> location;
  std::vector<Region> region;
  std::vector<std::vector<REdge>> adj;
};

RegionGraph build(const TimedAutomaton& ta, const RegionOps& ops) {
  RegionGraph g;
  std::map<std::pair<std::uint32_t, Region>, std::uint32_t> index;
  auto intern = [&](std::uint32_t loc, const Region& r) {
    auto [it, fresh] = index.emplace(std::make_pair(loc, r), static_cast<std::uint32_t>(g.location.size()));
    if (fresh) {
      g.location.push_back(loc);
      g.region.push_back(r);
      g.adj.emplace_back();
    }
    return it->second;
  };
  intern(static_cast<std::uint32_t>(ta.initial), ops.initial());
  for (std::size_t v = 0; v < g.location.size(); ++v) {
    const std::uint32_t loc = g.location[v];
    Region r = g.region[v];
    Region next = r;
    if (ops.delay(next)) {
      auto to = intern(loc, next);
      g.adj[v].push_back(REdge{to, true, 0});
    } else {
      g.adj[v].push_back(REdge{static_cast<std::uint32_t>(v), true, 0});
    }
    for (const auto& t : ta.transitions) {
      if (t.src != loc) continue;
      bool enabled = std::any_of(t.guard.clauses.begin(), t.guard.clauses.end(), [&](const Clause& c) {
        return std::all_of(c.begin(), c.end(), [&](const Atom& a) { return ops.satisfies(r, a); });
      });
      if (!enabled) continue;
      Region after = r;
      std::uint32_t mask = 0;
      for (auto x : t.resets) {
        ops.reset(after, x);
        mask |= 1u << x;
      }
      auto to = intern(static_cast<std::uint32_t>(t.dst), after);
      g.adj[v].push_back(REdge{to, false, mask});
    }
  }
  return g;
}

// Searches the subgraph induced by `alive` for a fair strongly connected set.
bool fair_set_exists(const TimedAutomaton& ta, const RegionGraph& g, const RegionOps& ops, std::vector<bool> alive) {
  const std::size_t n = g.location.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v])
      for (const auto& e : g.adj[v])
        if (alive[e.to]) adj[v].push_back(e.to);
  auto sccs = detail::tarjan(adj, [](std::uint32_t w) { return w; });
  const std::size_t clocks = ta.clocks.size();
  std::vector<std::vector<std::uint32_t>> members(sccs.count);
  for (std::uint32_t v = 0; v < n; ++v)
    if (alive[v]) members[sccs.component[v]].push_back(v);
  for (const auto& scc : members) {
    if (scc.empty()) continue;
    const auto c = sccs.component[scc[0]];
    bool has_delay = false, has_action = false, has_accepting = false;
    std::uint32_t reset_mask = 0;
    for (auto v : scc) {
      if (ta.locations[g.location[v]].accepting) has_accepting = true;
      for (const auto& e : g.adj[v]) {
        if (!alive[e.to] || sccs.component[e.to] != c) continue;
        if (e.delay) has_delay = true;
        else {
          has_action = true;
          reset_mask |= e.resets;
        }
      }
    }
    if (!has_action) continue;  // also covers trivial components
    std::vector<bool> keep(n, false);
    bool pruned = false;
    for (auto v : scc) {
      bool ok = true;
      for (std::size_t x = 0; x < clocks; ++x)
        if (!(reset_mask & (1u << x)) && !ops.unbounded(g.region[v], x)) ok = false;
      keep[v] = ok;
      if (!ok) pruned = true;
    }
    if (!pruned) {
      if (has_delay && has_accepting) return true;
      continue;
    }
    if (fair_set_exists(ta, g, ops, std::move(keep))) return true;
  }
  return false;
}

}  // namespace

bool region_brute_force(const TimedAutomaton& ta, const RegionLimits& limits) {
  ta.check_well_formed();
  if (ta.is_parametric()) fail(ErrorKind::Invalid, "region check needs a non-parametric automaton");
  const std::int64_t m = max_constant(ta);
  if (m > limits.max_constant)
    fail(ErrorKind::Limit, "largest constant " + std::to_string(m) + " exceeds region bound " +
                               std::to_string(limits.max_constant));
  if (ta.locations.size() > limits.max_locations)
    fail(ErrorKind::Limit, std::to_string(ta.locations.size()) + " locations exceed region bound " +
                               std::to_string(limits.max_locations));
  if (ta.clocks.size() > limits.max_clocks || ta.clocks.size() > 31)
    fail(ErrorKind::Limit, "too many clocks for the region check");
  RegionOps ops(ta.clocks.size(), m);
  RegionGraph g = build(ta, ops);
  return fair_set_exists(ta, g, ops, std::vector<bool>(g.location.size(), true));
}

}  // namespace tta

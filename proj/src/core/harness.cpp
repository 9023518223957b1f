#include "tta/harness.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "tta/error.hpp"
#include "tta/tile_format.hpp"
#include "tta/weighted.hpp"

namespace tta {

namespace {

// Portable draws: std distributions differ between standard libraries.
std::size_t uniform(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) fail(ErrorKind::Invalid, "uniform draw from an empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

bool chance(std::mt19937_64& rng, double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; }

const std::vector<Tile>& library_or_builtin(const std::vector<Tile>& library) {
  return library.empty() ? builtin_library() : library;
}

bool enterable_at_zero(const Tile& t) {
  std::vector<Rational> zero(t.body.clocks.size(), Rational(0));
  return !mentions_parameter(t.input().guard) && holds(t.input().guard, zero, std::nullopt);
}

std::size_t tile_size(const Tile& t) { return t.body.locations.size() + t.body.transitions.size(); }

struct Node {
  std::size_t tile = 0;  // library index
  std::vector<std::pair<std::string, std::size_t>> children;  // output, node
};

// Instances numbered in breadth-first order from node 0.
TiledTA emit(const std::vector<Node>& nodes, const std::vector<Tile>& library, std::int64_t ambient_c) {
  TiledTA tta;
  tta.ambient_c = ambient_c;
  std::vector<std::size_t> order{0};
  std::vector<std::size_t> id(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    id[order[i]] = i;
    for (const auto& [out, child] : nodes[order[i]].children) order.push_back(child);
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    tta.tiles.push_back(TileInstance{"T" + std::to_string(i), library[nodes[order[i]].tile]});
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& [out, child] : nodes[order[i]].children) {
      TileTransition c;
      c.src = i;
      c.output = out;
      c.dst = id[child];
      c.input = tta.tiles[c.dst].tile.input().location;
      tta.connections.push_back(std::move(c));
    }
  tta.check();
  return tta;
}

bool compatible(const Tile& from, const std::string& output, const Tile& to) {
  return !connection_problem(from, output, to, to.input().location);
}

struct Pools {
  std::vector<std::size_t> accepting, inner, dead, roots, accepting_roots, dead_roots;
};

Pools pools_of(const std::vector<Tile>& lib) {
  Pools p;
  for (std::size_t i = 0; i < lib.size(); ++i) {
    const Tile& t = lib[i];
    const bool zero = enterable_at_zero(t);
    if (t.accepting()) {
      p.accepting.push_back(i);
      if (zero) p.accepting_roots.push_back(i);
    } else {
      p.dead.push_back(i);
      if (zero) p.dead_roots.push_back(i);
      if (!t.outputs.empty()) {
        p.inner.push_back(i);
        if (zero) p.roots.push_back(i);
      }
    }
  }
  if (p.accepting.empty()) fail(ErrorKind::Invalid, "tile library has no accepting tile");
  return p;
}

// Picks a tile from `pool` that may follow `from` through `output`.
std::optional<std::size_t> pick_child(std::mt19937_64& rng, const std::vector<Tile>& lib, const std::vector<std::size_t>& pool,
                                      const Tile& from, const std::string& output, std::size_t retries) {
  if (pool.empty()) return std::nullopt;
  for (std::size_t attempt = 0; attempt < retries; ++attempt) {
    std::size_t pick = pool[uniform(rng, pool.size())];
    if (compatible(from, output, lib[pick])) return pick;
  }
  return std::nullopt;
}

std::vector<std::string> chosen_outputs(std::mt19937_64& rng, const Tile& t) {
  std::vector<std::string> outs;
  for (const auto& o : t.outputs) outs.push_back(o.location);
  if (outs.size() >= 2) {
    if (chance(rng, 0.5)) return {outs[0], outs[1]};
    return {outs[uniform(rng, outs.size())]};
  }
  return outs;
}

}  // namespace

TiledTA generate_random_ptta(const GenConfig& cfg) {
  if (cfg.max_depth < 1) fail(ErrorKind::Invalid, "max_depth must be at least 1");
  const auto& lib = library_or_builtin(cfg.library);
  const Pools pools = pools_of(lib);
  const std::int64_t c = cfg.ambient_c.value_or(library_max_constant(lib));
  std::mt19937_64 rng(cfg.seed);

  std::vector<Node> nodes;
  if (cfg.max_depth == 1) {
    const bool accept = chance(rng, cfg.accepting_leaf_probability) || pools.dead_roots.empty();
    const auto& pool = accept ? pools.accepting_roots : pools.dead_roots;
    if (pool.empty()) fail(ErrorKind::Invalid, "no tile can be entered with all clocks at zero");
    nodes.push_back(Node{pool[uniform(rng, pool.size())], {}});
    return emit(nodes, lib, c);
  }
  if (pools.roots.empty()) fail(ErrorKind::Invalid, "no tile with outputs can be entered with all clocks at zero");
  nodes.push_back(Node{pools.roots[uniform(rng, pools.roots.size())], {}});

  std::deque<std::pair<std::size_t, std::size_t>> queue{{0, 1}};  // node, depth
  while (!queue.empty()) {
    auto [n, depth] = queue.front();
    queue.pop_front();
    const Tile& parent = lib[nodes[n].tile];
    for (const auto& out : chosen_outputs(rng, parent)) {
      const std::size_t d = depth + 1;
      const bool leaf = d >= cfg.max_depth || chance(rng, cfg.stop_probability);
      const bool accept = leaf && chance(rng, cfg.accepting_leaf_probability);
      const auto& pool = !leaf ? pools.inner : accept ? pools.accepting : pools.dead;
      auto pick = pick_child(rng, lib, pool, parent, out, cfg.retries);
      if (!pick) continue;  // pruned
      nodes.push_back(Node{*pick, {}});
      nodes[n].children.emplace_back(out, nodes.size() - 1);
      if (!leaf) queue.emplace_back(nodes.size() - 1, d);
    }
  }
  return emit(nodes, lib, c);
}

TiledTA generate_sized_ptta(std::uint64_t seed, std::size_t target, const std::vector<Tile>& library) {
  const auto& lib = library_or_builtin(library);
  const Pools pools = pools_of(lib);
  const std::int64_t c = library_max_constant(lib);
  std::vector<std::size_t> leaves = pools.accepting;
  leaves.insert(leaves.end(), pools.dead.begin(), pools.dead.end());
  std::size_t largest_leaf = 0;
  for (auto i : leaves) largest_leaf = std::max(largest_leaf, tile_size(lib[i]) + 1);
  std::mt19937_64 rng(seed);

  for (int attempt = 0; attempt < 200; ++attempt) {
    if (pools.roots.empty()) break;
    std::vector<Node> nodes{Node{pools.roots[uniform(rng, pools.roots.size())], {}}};
    std::size_t used = tile_size(lib[nodes[0].tile]);
    std::vector<std::pair<std::size_t, std::string>> open;
    for (const auto& o : lib[nodes[0].tile].outputs) open.emplace_back(0, o.location);
    // Grow inner tiles while there is room for a couple of leaves afterwards.
    for (int stalls = 0; !open.empty() && used + 2 * largest_leaf < target && stalls < 64;) {
      std::size_t slot = uniform(rng, open.size());
      auto [n, out] = open[slot];
      auto pick = pick_child(rng, lib, pools.inner, lib[nodes[n].tile], out, 8);
      if (!pick) {
        ++stalls;
        continue;
      }
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(slot));
      nodes.push_back(Node{*pick, {}});
      nodes[n].children.emplace_back(out, nodes.size() - 1);
      used += tile_size(lib[*pick]) + 1;
      for (const auto& o : lib[*pick].outputs) open.emplace_back(nodes.size() - 1, o.location);
    }
    if (used > target) continue;
    // Fill the remaining budget exactly with leaves; an empty slot costs nothing.
    const std::size_t budget = target - used;
    std::vector<std::vector<std::size_t>> options(open.size());
    for (std::size_t s = 0; s < open.size(); ++s) {
      for (auto i : leaves)
        if (compatible(lib[nodes[open[s].first].tile], open[s].second, lib[i])) options[s].push_back(i);
      std::shuffle(options[s].begin(), options[s].end(), rng);
    }
    // reach[s][b]: slots s.. can absorb exactly b.
    std::vector<std::vector<char>> reach(open.size() + 1, std::vector<char>(budget + 1, 0));
    reach[open.size()][0] = 1;
    for (std::size_t s = open.size(); s-- > 0;)
      for (std::size_t b = 0; b <= budget; ++b) {
        if (reach[s + 1][b]) reach[s][b] = 1;
        for (auto i : options[s]) {
          std::size_t cost = tile_size(lib[i]) + 1;
          if (cost <= b && reach[s + 1][b - cost]) reach[s][b] = 1;
        }
      }
    if (!reach[0][budget]) continue;
    std::size_t b = budget;
    for (std::size_t s = 0; s < open.size(); ++s) {
      std::optional<std::size_t> choice;
      for (auto i : options[s]) {
        std::size_t cost = tile_size(lib[i]) + 1;
        if (cost <= b && reach[s + 1][b - cost]) {
          choice = i;
          break;
        }
      }
      if (!choice) continue;  // leaving the slot empty works
      nodes.push_back(Node{*choice, {}});
      nodes[open[s].first].children.emplace_back(open[s].second, nodes.size() - 1);
      b -= tile_size(lib[*choice]) + 1;
    }
    TiledTA tta = emit(nodes, lib, c);
    if (tta.size() == target) return tta;
  }
  fail(ErrorKind::Invalid, "no tree of size " + std::to_string(target) + " found from this library");
}

IntervalSet predict_intervals(const TiledTA& tta) {
  tta.check();
  auto declared = [&](std::size_t tile, const std::string& key) {
    const auto& d = tta.tiles[tile].tile.declared;
    auto it = d.find(key);
    if (it == d.end()) fail(ErrorKind::Invalid, "tile '" + tta.tiles[tile].id + "' declares no set for " + key);
    return it->second;
  };
  std::vector<std::vector<const TileTransition*>> out(tta.tiles.size());
  for (const auto& c : tta.connections) out[c.src].push_back(&c);
  IntervalSet result;
  std::vector<char> on_path(tta.tiles.size(), 0);
  std::function<void(std::size_t, const IntervalSet&)> walk = [&](std::size_t tile, const IntervalSet& acc) {
    if (acc.is_empty()) return;  // no extension can contribute
    if (tta.is_accepting(tile)) {
      result = result.unite(acc.intersect(declared(tile, kSelf)));
      return;
    }
    on_path[tile] = 1;
    for (const auto* c : out[tile])
      if (!on_path[c->dst]) walk(c->dst, acc.intersect(declared(tile, c->output)));
    on_path[tile] = 0;
  };
  walk(tta.initial, IntervalSet::all());
  return result;
}

TilePath witness_to_tile_path(const TiledTA& tta, const Flattening& flat, const Witness& witness) {
  const auto& ta = flat.ta;
  if (witness.cycle.empty()) fail(ErrorKind::Invalid, "witness has an empty cycle");
  std::size_t loc = ta.initial;
  std::vector<std::size_t> tiles{flat.owner.at(loc)};
  std::vector<std::string> letters;
  auto step = [&](const WitnessStep& s) {
    if (s.transition >= ta.transitions.size())
      fail(ErrorKind::Invalid, "witness names transition t" + std::to_string(s.transition) + " which does not exist");
    const Transition& t = ta.transitions[s.transition];
    if (t.src != loc)
      fail(ErrorKind::Invalid, "witness transition t" + std::to_string(s.transition) + " does not leave " + ta.locations[loc].name);
    loc = t.dst;
    if (flat.owner[loc] != tiles.back()) {
      tiles.push_back(flat.owner[loc]);
      letters.push_back(t.letter);
    }
  };
  for (const auto& s : witness.prefix) step(s);
  const std::size_t cycle_start = loc;
  const std::size_t tile = flat.owner[loc];
  bool accepting = ta.locations[loc].accepting;
  for (const auto& s : witness.cycle) {
    step(s);
    if (flat.owner[loc] != tile) fail(ErrorKind::Invalid, "witness cycle leaves tile " + tta.tiles[tile].id);
    accepting = accepting || ta.locations[loc].accepting;
  }
  if (loc != cycle_start) fail(ErrorKind::Invalid, "witness cycle does not return to its start");
  if (!accepting) fail(ErrorKind::Invalid, "witness cycle visits no accepting location");
  if (!tta.is_accepting(tile)) fail(ErrorKind::Invalid, "witness cycle lies in non-accepting tile " + tta.tiles[tile].id);
  return TilePath{std::move(tiles), std::move(letters)};
}

std::string Verdict::label() const {
  if (status == ToolStatus::Timeout) return "timeout";
  if (status == ToolStatus::Crashed) return "crash";
  return passed ? "pass" : "fail";
}

Verdict test_tool(const ToolAdapter& adapter, const TiledTA& tta) {
  Verdict v;
  Flattening flat = flatten_with_map(tta);
  auto wa = underlying_wa(tta, declared_weights(tta));
  v.oracle_word = shortest_distance(wa);
  v.oracle_nonempty = !v.oracle_word.none();
  v.oracle_intervals = bits_to_intervals(v.oracle_word, tta.ambient_c);

  ToolAnswer answer;
  try {
    answer = adapter.run(ParametricTA::from(flat.ta));
  } catch (const std::exception& e) {
    answer.status = ToolStatus::Crashed;
    answer.diagnostic = e.what();
  }
  v.status = answer.status;
  v.tool_empty = answer.empty;
  v.calls = answer.calls;
  if (v.calls.empty()) v.calls.push_back(CallRecord{});
  v.diagnostic = answer.diagnostic;
  if (answer.status != ToolStatus::Ok) {
    v.mode = VerdictMode::ToolError;
    v.passed = false;
    return v;
  }
  if (!answer.empty && answer.witness) {
    v.mode = VerdictMode::WitnessChecked;
    try {
      v.path = witness_to_tile_path(tta, flat, *answer.witness);
      v.passed = !path_weight(wa, v.path->tiles, v.path->letters).none();
      if (!v.passed) v.diagnostic = "witness follows a tile path of zero weight";
    } catch (const Error& e) {
      v.passed = false;
      v.diagnostic = std::string("witness rejected: ") + e.what();
    }
    return v;
  }
  v.mode = VerdictMode::NonZeroWordsChecked;
  v.passed = answer.empty != v.oracle_nonempty;
  if (!v.passed) v.diagnostic = answer.empty ? "tool reported empty, oracle has words of non-zero weight" : "tool reported non-empty, oracle has none";
  return v;
}

std::string CampaignSummary::str() const {
  std::ostringstream out;
  out << "#Tests " << tests << "\n"
      << "MaxSize " << max_size << "\n"
      << "#NonEmpty " << nonempty << "\n"
      << "#Empty " << empty << "\n";
  out.setf(std::ios::fixed);
  out.precision(1);
  out << "Accuracy " << accuracy() << "%\n"
      << "Timeout " << timeouts << "\n";
  if (!failed.empty()) {
    out << "Failed";
    for (auto id : failed) out << " " << id;
    out << "\n";
  }
  return out.str();
}

CampaignResult run_campaign(const ToolAdapter& adapter, const CampaignConfig& cfg) {
  if (cfg.runs < 1) fail(ErrorKind::Invalid, "a campaign needs at least one run");
  CampaignResult result;
  result.records.resize(cfg.runs);
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(cfg.runs);
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.runs; i = next++) {
      TestRecord& r = result.records[i];
      r.id = i;
      r.seed = cfg.gen.seed + i;
      try {
        GenConfig g = cfg.gen;
        g.seed = r.seed;
        TiledTA tta = generate_random_ptta(g);
        r.size = tta.size();
        r.verdict = test_tool(adapter, tta);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cfg.runs));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < cfg.runs; ++i)
    if (!errors[i].empty()) fail(ErrorKind::Invalid, "test " + std::to_string(i) + ": " + errors[i]);

  std::ostringstream csv;
  csv << "test_id,seed,size,call_index,wall_seconds,peak_kbytes,verdict\n";
  csv.setf(std::ios::fixed);
  csv.precision(6);
  auto& s = result.summary;
  for (const auto& r : result.records) {
    const Verdict& v = r.verdict;
    double total = 0;
    long peak = 0;
    for (const auto& call : v.calls) {
      csv << r.id << ',' << r.seed << ',' << r.size << ',' << call.index << ',';
      if (cfg.measurements)
        csv << call.seconds << ',' << call.peak_kbytes;
      else
        csv << "-,-";
      csv << ',' << v.label() << '\n';
      total += call.seconds;
      peak = std::max(peak, call.peak_kbytes);
    }
    csv << r.id << ',' << r.seed << ',' << r.size << ",all,";
    if (cfg.measurements)
      csv << total << ',' << peak;
    else
      csv << "-,-";
    csv << ',' << v.label() << '\n';

    ++s.tests;
    s.max_size = std::max(s.max_size, r.size);
    (v.oracle_nonempty ? s.nonempty : s.empty) += 1;
    if (v.passed) ++s.passed;
    else s.failed.push_back(r.id);
    if (v.status == ToolStatus::Timeout) ++s.timeouts;
  }
  result.csv = csv.str();
  return result;
}

std::vector<MeasurePoint> measure_ladder(const std::vector<std::size_t>& sizes, std::size_t instances,
                                         std::uint64_t seed, const ToolAdapter& adapter) {
  std::vector<MeasurePoint> points;
  for (std::size_t size : sizes) {
    MeasurePoint p;
    p.size = size;
    for (std::size_t i = 0; i < instances; ++i) {
      TiledTA tta = generate_sized_ptta(seed + i, size);
      ToolAnswer a = adapter.run(ParametricTA::from(flatten(tta)));
      if (a.status != ToolStatus::Ok) fail(ErrorKind::Invalid, "tool failed during measurement: " + a.diagnostic);
      ++p.instances;
      p.calls += a.calls.size();
      for (const auto& c : a.calls) {
        p.total_seconds += c.seconds;
        p.peak_kbytes = std::max(p.peak_kbytes, c.peak_kbytes);
      }
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace tta

#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "tta/error.hpp"
#include "tta/priced.hpp"
#include "tta/tile_format.hpp"
#include "tta/weighted.hpp"

using namespace tta;

namespace {

PricedTA line() { return load_priced_ta(test::fixture_path("priced_line.pta")); }

TimedRun run_of(const PricedTA& p, std::vector<std::pair<std::string, Rational>> steps) {
  TimedRun r;
  for (auto& [name, t] : steps) r.steps.emplace_back(*p.base.find_location(name), t);
  return r;
}

TileInstance inst(std::size_t i, Tile t) { return TileInstance{"T" + std::to_string(i), std::move(t)}; }

void connect(TiledTA& tta, std::size_t src, std::size_t dst, std::uint64_t cost) {
  TileTransition c;
  c.src = src;
  c.output = "q1";
  c.dst = dst;
  c.input = "q0";
  c.cost = cost;
  tta.connections.push_back(c);
}

// The template tile followed by an exit edge enforcing x == alpha.
PricedTA crossing(const Tile& t) {
  PricedTA p;
  p.base = t.body;
  p.base.initial = 0;
  std::size_t exit = p.base.add_location("exit");
  Transition e;
  e.src = 1;
  e.dst = exit;
  e.guard = t.outputs.at(0).guard;
  p.base.transitions.push_back(e);
  p.location_cost = {t.location_cost.at("q0"), t.location_cost.at("q1"), 0};
  p.edge_cost[{0, 1}] = t.edge_cost.at({"q0", "q1"});
  return p;
}

}  // namespace

TEST_SUITE("priced") {
  TEST_CASE("cost of the four-location line with delays 2, 3, 1") {
    auto p = line();
    auto full = run_of(p, {{"q0", 0}, {"q1", 2}, {"q2", 5}, {"q3", 6}});
    CHECK(run_cost(p, full) == Rational(14));
    auto prefix = run_of(p, {{"q0", 0}, {"q1", 2}});
    CHECK(run_cost(p, prefix) == Rational(6));
  }

  TEST_CASE("zero costs give zero") {
    auto p = line();
    std::fill(p.location_cost.begin(), p.location_cost.end(), 0);
    p.edge_cost.clear();
    CHECK(run_cost(p, run_of(p, {{"q0", 0}, {"q1", 2}, {"q2", 5}, {"q3", 6}})) == Rational(0));
  }

  TEST_CASE("invalid runs are rejected") {
    auto p = line();
    CHECK_THROWS_AS(run_cost(p, run_of(p, {{"q0", 0}, {"q1", 3}})), Error);           // guard x == 2
    CHECK_THROWS_AS(run_cost(p, run_of(p, {{"q0", 0}, {"q2", 2}})), Error);           // no edge
    CHECK_THROWS_AS(run_cost(p, run_of(p, {{"q0", 1}, {"q1", 2}})), Error);           // starts late
    CHECK_THROWS_AS(run_cost(p, run_of(p, {{"q0", 0}})), Error);                      // too short
    CHECK_THROWS_AS(run_cost(p, run_of(p, {{"q1", 0}, {"q2", 3}})), Error);           // wrong start
    CHECK_THROWS_AS(run_cost(p, run_of(p, {{"q0", 0}, {"q1", 2}, {"q2", 2}})), Error);  // no time passes
  }

  TEST_CASE("rational delays are summed exactly") {
    auto p = parse_priced_ta(
        "clock x\nlocation a initial\nlocation b accepting\nedge a b guard \"x > 0 && x < 1\" resets {}\n"
        "cost location a 3\ncost edge a b 2\n");
    CHECK(run_cost(p, run_of(p, {{"a", 0}, {"b", Rational(1, 3)}})) == Rational(3));
    CHECK(run_cost(p, run_of(p, {{"a", 0}, {"b", Rational(1, 4)}})) == Rational(11, 4));
  }

  TEST_CASE("run cost is additive at a shared configuration") {
    auto p = line();
    Rational first = run_cost(p, run_of(p, {{"q0", 0}, {"q1", 2}, {"q2", 5}}));
    // The second half starts in q2 with x = 0, like a fresh start from an automaton rooted there.
    PricedTA tail = p;
    tail.base.initial = *p.base.find_location("q2");
    Rational second = run_cost(tail, run_of(tail, {{"q2", 0}, {"q3", 1}}));
    CHECK(first + second == Rational(14));
  }

  TEST_CASE("priced automaton text round trip and errors") {
    auto p = line();
    auto again = parse_priced_ta(write_priced_ta(p));
    CHECK(write_priced_ta(again) == write_priced_ta(p));
    CHECK_THROWS_AS(parse_priced_ta("clock x\nlocation a initial\ncost location b 1\n"), Error);
    CHECK_THROWS_AS(parse_priced_ta("clock x\nlocation a initial\nlocation b\ncost edge a b 1\n"), Error);
    CHECK_THROWS_AS(parse_priced_ta("clock x\nlocation a initial\ncost location a -1\n"), Error);
    CHECK_THROWS_AS(parse_priced_ta("clock x\nlocation a initial\ncost nothing\n"), Error);
  }

  TEST_CASE("elementary tile weight formula") {
    CHECK(tile_weight_elementary(priced_elementary_tile("a", 3, 2, 1, 4), 3) == 7);
    CHECK(tile_weight_elementary(priced_elementary_tile("b", 1, 0, 0, 0), 1) == 0);
    CHECK(tile_weight_elementary(priced_elementary_tile("c", 2, 1, 5, 3), 2) == 5);
    CHECK(priced_elementary_tile("a", 3, 2, 1, 4).weight.at("q1") == 7);
  }

  TEST_CASE("template mismatches are refused") {
    auto t = priced_elementary_tile("a", 3, 2, 1, 4);
    CHECK_THROWS_AS(tile_weight_elementary(t, 2), Error);  // guard uses 3
    CHECK_THROWS_AS(tile_weight_elementary(find_tile(builtin_library(), "elem_gt_4"), 2), Error);
    auto extra = t;
    extra.body.add_location("q2");
    CHECK_THROWS_AS(tile_weight_elementary(extra, 3), Error);
    auto reset = t;
    reset.outputs[0].resets = {"x"};
    CHECK_THROWS_AS(tile_weight_elementary(reset, 3), Error);
  }

  TEST_CASE("sampled crossings never undercut the tile weight") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
      const std::uint64_t alpha = 1 + rng() % 4;
      auto t = priced_elementary_tile("s", alpha, rng() % 6, rng() % 6, rng() % 6);
      const std::uint64_t w = tile_weight_elementary(t, alpha);
      auto p = crossing(t);
      const auto a = static_cast<std::int64_t>(alpha);
      for (std::int64_t k = 1; k < 8 * a; ++k) {
        TimedRun r;
        r.steps = {{0, Rational(0)}, {1, Rational(k, 8)}, {2, Rational(a)}};
        CHECK(run_cost(p, r) >= Rational(static_cast<std::int64_t>(w)));
      }
    }
  }

  TEST_CASE("oracle examples") {
    TiledTA single;
    single.ambient_c = 1;
    single.tiles = {inst(0, priced_elementary_tile("g", 1, 0, 0, 7, true))};
    CHECK(priced_oracle(single) == Price::of(7));
    CHECK(min_cost_brute(single) == Price::of(7));

    TiledTA chain;
    chain.ambient_c = 2;
    chain.tiles = {inst(0, priced_elementary_tile("c", 2, 1, 5, 3)), inst(1, priced_elementary_tile("g", 1, 0, 0, 7, true))};
    connect(chain, 0, 1, 2);
    CHECK(chain.tiles[0].tile.weight.at("q1") == 5);
    CHECK(priced_oracle(chain) == Price::of(14));
    CHECK(min_cost_brute(chain) == Price::of(14));

    auto diamond = load_tta(test::fixture_path("priced_diamond.tta"));
    CHECK(priced_oracle(diamond) == Price::of(11));
    CHECK(min_cost_brute(diamond) == Price::of(11));
  }

  TEST_CASE("no accepting tile means infinite cost") {
    TiledTA t;
    t.ambient_c = 1;
    t.tiles = {inst(0, priced_elementary_tile("a", 1, 1, 1, 1)), inst(1, priced_elementary_tile("b", 1, 1, 1, 1))};
    connect(t, 0, 1, 0);
    CHECK(priced_oracle(t) == Price::inf());
    CHECK(min_cost_brute(t) == Price::inf());
  }

  TEST_CASE("missing weight is an error") {
    TiledTA t;
    t.ambient_c = 1;
    t.tiles = {inst(0, priced_elementary_tile("a", 1, 1, 1, 1)), inst(1, priced_elementary_tile("g", 1, 1, 1, 1, true))};
    connect(t, 0, 1, 0);
    t.tiles[1].tile.weight.clear();
    CHECK_THROWS_AS(priced_oracle(t), Error);
    CHECK_THROWS_AS(min_cost_brute(t), Error);
  }

  TEST_CASE("oracle equals brute force on generated priced automata") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      auto tta = generate_priced_tta(seed, 8);
      CHECK(tta.tiles.size() <= 8);
      CHECK(priced_oracle(tta) == min_cost_brute(tta));
      CHECK(write_tta(tta) == write_tta(generate_priced_tta(seed, 8)));
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto tta = generate_priced_tta(1000 + seed, 5);
      CHECK(priced_oracle(tta) == min_cost_brute(tta));
    }
  }

  TEST_CASE("raising a cost never lowers the oracle") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      auto tta = generate_priced_tta(seed, 8);
      const Price before = priced_oracle(tta);
      std::mt19937_64 rng(seed);
      auto bumped = tta;
      if (!bumped.connections.empty() && rng() % 2) {
        bumped.connections[rng() % bumped.connections.size()].cost += 1 + rng() % 5;
      } else {
        auto& w = bumped.tiles[rng() % bumped.tiles.size()].tile.weight;
        w.begin()->second += 1 + rng() % 5;
      }
      CHECK_FALSE(priced_oracle(bumped) < before);
    }
  }

  TEST_CASE("concrete runs of the flattening cost at least the oracle") {
    std::mt19937_64 rng(23);
    std::size_t runs = 0;
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
      auto tta = generate_priced_tta(seed, 6);
      auto flat = flatten_priced(tta);
      auto f = flatten_with_map(tta);
      // Random walk over tiles; inside each tile wait k/8 before q0 -> q1 and leave at alpha.
      TimedRun r;
      Rational now(0);
      std::size_t tile = tta.initial;
      std::size_t base = 0;
      auto base_of = [&](std::size_t t) {
        for (std::size_t l = 0; l < f.owner.size(); ++l)
          if (f.owner[l] == t) return l;
        return std::size_t{0};
      };
      bool reached = false;
      for (int hops = 0; hops < 12; ++hops) {
        base = base_of(tile);
        const Tile& t = tta.tiles[tile].tile;
        const auto alpha = t.body.transitions[0].guard.clauses[0][1].constant;
        r.steps.emplace_back(base, now);
        const Rational d = alpha * Rational(static_cast<std::int64_t>(1 + rng() % 7), 8);
        r.steps.emplace_back(base + 1, now + d);
        if (t.accepting()) {
          reached = true;
          break;
        }
        std::vector<std::size_t> next;
        for (const auto& c : tta.connections)
          if (c.src == tile) next.push_back(c.dst);
        if (next.empty()) break;
        now = now + alpha;
        tile = next[rng() % next.size()];
      }
      if (!reached) continue;
      ++runs;
      const Price oracle = priced_oracle(tta);
      REQUIRE_FALSE(oracle.infinite);
      CHECK(run_cost(flat, r) >= Rational(static_cast<std::int64_t>(oracle.value)));
    }
    CHECK(runs > 10);
  }

  TEST_CASE("priced tiles survive the tile format") {
    auto diamond = load_tta(test::fixture_path("priced_diamond.tta"));
    CHECK(write_tta(parse_tta(write_tta(diamond))) == write_tta(diamond));
    CHECK(diamond.connections[2].cost == 1);
    CHECK(diamond.tiles[1].tile.weight.at("q1") == 5);
  }
}

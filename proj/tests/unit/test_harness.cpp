#include <chrono>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "tta/error.hpp"
#include "tta/harness.hpp"
#include "tta/tile_format.hpp"
#include "tta/weighted.hpp"

using namespace tta;

namespace {

// Accepting variant of an elementary tile: q2 is accepting with a self loop.
Tile accepting_elementary(std::int64_t n, Cmp cmp) {
  Tile t = elementary_tile(n, cmp);
  t.name = "acc_" + t.name;
  auto q2 = *t.body.find_location("q2");
  t.body.locations[q2].accepting = true;
  Transition loop;
  loop.src = q2;
  loop.dst = q2;
  t.body.transitions.push_back(loop);
  t.declared[kSelf] = t.declared.at("q2");
  t.declared.erase("q2");
  t.outputs.clear();
  return t;
}

TileInstance inst(std::size_t i, Tile t) { return TileInstance{"T" + std::to_string(i), std::move(t)}; }

void connect(TiledTA& tta, std::size_t src, const std::string& out, std::size_t dst) {
  TileTransition c;
  c.src = src;
  c.output = out;
  c.dst = dst;
  c.input = tta.tiles[dst].tile.input().location;
  tta.connections.push_back(c);
}

const Tile& lib(const std::string& name) { return find_tile(builtin_library(), name); }

TiledTA tree10() { return load_tta(test::fixture_path("tree10.tta")); }

std::size_t depth_of(const TiledTA& tta) {
  std::vector<std::size_t> depth(tta.tiles.size(), 1);
  for (const auto& c : tta.connections) depth[c.dst] = depth[c.src] + 1;  // BFS order: parents first
  return *std::max_element(depth.begin(), depth.end());
}

// Midpoint of a canonical interval; 2C + 1 for the unbounded one.
Rational sample_of(std::int64_t c, std::size_t i) {
  Interval iv = canonical_interval(c, i);
  if (iv.hi_infinite) return Rational(2 * c + 1);
  return (iv.lo + iv.hi) * Rational(1, 2);
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("depth one with certain acceptance gives a single accepting tile") {
    GenConfig g;
    g.seed = 1;
    g.max_depth = 1;
    g.accepting_leaf_probability = 1;
    auto tta = generate_random_ptta(g);
    REQUIRE(tta.tiles.size() == 1);
    CHECK(tta.is_accepting(0));
    CHECK(tta.connections.empty());
  }

  TEST_CASE("generated trees respect the shape contract and are reproducible") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
      GenConfig g;
      g.seed = seed;
      g.max_depth = 1 + seed % 5;
      auto tta = generate_random_ptta(g);
      CHECK(write_tta(tta) == write_tta(generate_random_ptta(g)));
      CHECK(depth_of(tta) <= g.max_depth);
      std::vector<int> in(tta.tiles.size(), 0), out(tta.tiles.size(), 0);
      for (const auto& c : tta.connections) {
        CHECK(c.src < c.dst);
        ++in[c.dst];
        ++out[c.src];
        CHECK_FALSE(connection_problem(tta.tiles[c.src].tile, c.output, tta.tiles[c.dst].tile, c.input));
      }
      for (std::size_t i = 0; i < tta.tiles.size(); ++i) {
        CHECK(in[i] == (i == 0 ? 0 : 1));
        CHECK(out[i] <= 2);
        if (out[i] > 0) CHECK_FALSE(tta.is_accepting(i));
      }
    }
  }

  TEST_CASE("a two-tile library at depth three gives at most seven tiles") {
    GenConfig g;
    g.library = {lib("fork"), lib("acc_le_6")};
    g.max_depth = 3;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      g.seed = seed;
      auto tta = generate_random_ptta(g);
      CHECK(tta.tiles.size() <= 7);
      std::size_t accepting = 0;
      for (std::size_t i = 0; i < tta.tiles.size(); ++i) accepting += tta.is_accepting(i);
      CHECK(accepting <= 4);
      CHECK(write_tta(tta) == write_tta(generate_random_ptta(g)));
    }
  }

  TEST_CASE("the ten-tile fixture is reproduced from its seed") {
    GenConfig g;
    g.seed = 65933;
    g.max_depth = 4;
    auto tta = generate_random_ptta(g);
    CHECK(write_tta(tta) == write_tta(tree10()));
    std::vector<std::size_t> accepting;
    for (std::size_t i = 0; i < tta.tiles.size(); ++i)
      if (tta.is_accepting(i)) accepting.push_back(i);
    CHECK(tta.tiles.size() == 10);
    CHECK(accepting == std::vector<std::size_t>{6, 7, 9});
    CHECK(predict_intervals(tta).str() == "(0, 1/2] ∪ (2, 4]");
  }

  TEST_CASE("accepting elementary helper tile is exact") {
    CHECK(compute_parameter_set(accepting_elementary(8, Cmp::Le), kSelf, 10).str() == "(0, 4]");
  }

  TEST_CASE("prediction: chain, two leaves, disjoint sets") {
    TiledTA chain;
    chain.ambient_c = 10;
    chain.tiles = {inst(0, lib("elem_gt_4")), inst(1, accepting_elementary(8, Cmp::Le))};
    connect(chain, 0, "q2", 1);
    CHECK(predict_intervals(chain).str() == "(2, 4]");

    TiledTA two;
    two.ambient_c = 10;
    two.tiles = {inst(0, lib("fork")), inst(1, lib("elem_gt_4")), inst(2, accepting_elementary(8, Cmp::Le)),
                 inst(3, lib("acc_eq_3"))};
    connect(two, 0, "q2", 1);
    connect(two, 1, "q2", 2);
    connect(two, 0, "q3", 3);
    CHECK(predict_intervals(two).str() == "{3/2} ∪ (2, 4]");

    TiledTA disjoint;
    disjoint.ambient_c = 10;
    disjoint.tiles = {inst(0, lib("elem_gt_4")), inst(1, lib("elem_lt_2")), inst(2, lib("acc_any"))};
    connect(disjoint, 0, "q2", 1);
    connect(disjoint, 1, "q2", 2);
    CHECK(predict_intervals(disjoint).is_empty());
  }

  TEST_CASE("prediction equals the shortest distance of the underlying automaton") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      GenConfig g;
      g.seed = seed;
      auto tta = generate_random_ptta(g);
      auto wa = underlying_wa(tta, declared_weights(tta));
      CHECK(predict_intervals(tta) == bits_to_intervals(shortest_distance(wa), tta.ambient_c));
    }
  }

  TEST_CASE("prediction on a cyclic tiled automaton uses simple paths") {
    TiledTA t;
    t.ambient_c = 10;
    t.tiles = {inst(0, lib("fork")), inst(1, lib("elem_gt_0")), inst(2, lib("acc_window"))};
    connect(t, 0, "q2", 1);
    connect(t, 1, "q2", 0);
    connect(t, 0, "q3", 2);
    auto wa = underlying_wa(t, declared_weights(t));
    CHECK(predict_intervals(t).str() == "(2, 4]");
    CHECK(predict_intervals(t) == bits_to_intervals(shortest_distance(wa), t.ambient_c));
  }

  TEST_CASE("witness of the ten-tile fixture maps to an accepting tile path") {
    auto tta = tree10();
    auto flat = flatten_with_map(tta);
    EmpOptions opt;
    opt.fast = true;
    auto r = emp_check(ParametricTA::from(flat.ta), opt);
    REQUIRE(r.nonempty);
    REQUIRE(r.witness);
    auto path = witness_to_tile_path(tta, flat, *r.witness);
    CHECK(path.tiles.front() == 0);
    CHECK(tta.is_accepting(path.tiles.back()));
    CHECK(path.letters.size() + 1 == path.tiles.size());
    auto wa = underlying_wa(tta, declared_weights(tta));
    CHECK_FALSE(path_weight(wa, path.tiles, path.letters).none());
    // A witness at the value 1/4 can only end in T9 through T2 and T5.
    auto low = check_non_par_emptiness(ParametricTA::from(flat.ta), Rational(1, 4));
    REQUIRE(low.witness);
    CHECK(witness_to_tile_path(tta, flat, *low.witness).tiles == std::vector<std::size_t>{0, 2, 5, 9});
    CHECK(flat.ta.size() == tta.size());
  }

  TEST_CASE("witness inside a single accepting initial tile maps to T0") {
    TiledTA t;
    t.ambient_c = 10;
    t.tiles = {inst(0, lib("acc_any"))};
    auto flat = flatten_with_map(t);
    auto b = buchi_emptiness(prepare_for_check(ParametricTA::from(flat.ta), Rational(1)));
    REQUIRE(b.witness);
    auto path = witness_to_tile_path(t, flat, *b.witness);
    CHECK(path.tiles == std::vector<std::size_t>{0});
    CHECK(path.letters.empty());
  }

  TEST_CASE("malformed witnesses are rejected") {
    TiledTA t;
    t.ambient_c = 10;
    t.tiles = {inst(0, lib("fork")), inst(1, lib("elem_gt_0")), inst(2, lib("acc_any"))};
    connect(t, 0, "q2", 1);  // transition 7
    connect(t, 1, "q2", 0);  // transition 8
    connect(t, 0, "q3", 2);  // transition 9
    auto flat = flatten_with_map(t);
    REQUIRE(flat.ta.transitions.size() == 10);
    auto steps = [](std::initializer_list<std::size_t> ts) {
      std::vector<WitnessStep> out;
      for (auto x : ts) out.push_back(WitnessStep{x, 0});
      return out;
    };
    // fork: t0 q0->q1, t1 q1->q2, t2 q1->q3; elem_gt_0: t3 q0->q1, t4 q1->q2; acc_any: t5, t6 loop.
    Witness across{steps({}), steps({0, 1, 7, 3, 4, 8})};
    CHECK_THROWS_AS(witness_to_tile_path(t, flat, across), Error);
    Witness good{steps({0, 2, 9, 5}), steps({6})};
    CHECK(witness_to_tile_path(t, flat, good).tiles == std::vector<std::size_t>{0, 2});
    Witness unknown{steps({0, 42}), steps({6})};
    CHECK_THROWS_AS(witness_to_tile_path(t, flat, unknown), Error);
    Witness disconnected{steps({0, 1}), steps({6})};
    CHECK_THROWS_AS(witness_to_tile_path(t, flat, disconnected), Error);
    Witness open{steps({0, 2, 9}), steps({5})};
    CHECK_THROWS_AS(witness_to_tile_path(t, flat, open), Error);
  }

  TEST_CASE("internal adapter passes on generated instances in both modes") {
    auto fast = internal_adapter(true);
    auto full = internal_adapter(false);
    std::size_t witnessed = 0, nonzero = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      GenConfig g;
      g.seed = seed;
      auto tta = generate_random_ptta(g);
      for (const auto* a : {fast.get(), full.get()}) {
        Verdict v = test_tool(*a, tta);
        CHECK(v.passed);
        CHECK(v.label() == "pass");
        CHECK(v.oracle_nonempty == !predict_intervals(tta).is_empty());
        CHECK((v.mode == VerdictMode::WitnessChecked) == (!v.tool_empty));
        CHECK(!v.calls.empty());
        (v.mode == VerdictMode::WitnessChecked ? witnessed : nonzero) += 1;
      }
    }
    CHECK(witnessed > 0);
    CHECK(nonzero > 0);
  }

  TEST_CASE("planted faults are caught") {
    auto tta = tree10();
    Verdict empty = test_tool(*mutant_adapter(Mutant::AlwaysEmpty), tta);
    CHECK_FALSE(empty.passed);
    CHECK(empty.mode == VerdictMode::NonZeroWordsChecked);

    TiledTA dead;
    dead.ambient_c = 10;
    dead.tiles = {inst(0, lib("elem_gt_4")), inst(1, lib("elem_lt_2")), inst(2, lib("acc_any"))};
    connect(dead, 0, "q2", 1);
    connect(dead, 1, "q2", 2);
    Verdict yes = test_tool(*mutant_adapter(Mutant::AlwaysNonEmpty), dead);
    CHECK_FALSE(yes.passed);
    CHECK(yes.mode == VerdictMode::NonZeroWordsChecked);
    Verdict corrupt = test_tool(*mutant_adapter(Mutant::CorruptWitness), dead);
    CHECK_FALSE(corrupt.passed);
    CHECK(corrupt.mode == VerdictMode::WitnessChecked);
    REQUIRE(corrupt.path);
    CHECK(corrupt.path->tiles == std::vector<std::size_t>{0, 1, 2});

    TiledTA low;
    low.ambient_c = 10;
    low.tiles = {inst(0, lib("elem_lt_2")), inst(1, lib("acc_le_1"))};
    connect(low, 0, "q2", 1);
    Verdict shifted = test_tool(*mutant_adapter(Mutant::OffByOne), low);
    CHECK_FALSE(shifted.passed);
    CHECK(shifted.tool_empty);
  }

  TEST_CASE("each mutant is caught within fifty seeded tests") {
    for (auto m : {Mutant::AlwaysEmpty, Mutant::AlwaysNonEmpty, Mutant::CorruptWitness, Mutant::OffByOne}) {
      CampaignConfig cfg;
      cfg.gen.seed = 1000;
      cfg.runs = 50;
      cfg.workers = 4;
      auto r = run_campaign(*mutant_adapter(m), cfg);
      CAPTURE(mutant_adapter(m)->name());
      CHECK_FALSE(r.summary.failed.empty());
      CHECK(r.summary.accuracy() < 100.0);
    }
  }

  TEST_CASE("campaign CSV is deterministic across worker counts") {
    CampaignConfig cfg;
    cfg.gen.seed = 77;
    cfg.runs = 30;
    cfg.measurements = false;
    cfg.workers = 1;
    auto a = run_campaign(*internal_adapter(), cfg);
    cfg.workers = 4;
    auto b = run_campaign(*internal_adapter(), cfg);
    CHECK(a.csv == b.csv);
    CHECK(a.summary.accuracy() == 100.0);
    CHECK(a.summary.tests == 30);
    CHECK(a.summary.nonempty + a.summary.empty == 30);
    std::istringstream lines(a.csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "test_id,seed,size,call_index,wall_seconds,peak_kbytes,verdict");
    std::size_t all_rows = 0;
    for (std::string line; std::getline(lines, line);) all_rows += line.find(",all,") != std::string::npos;
    CHECK(all_rows == 30);
  }

  TEST_CASE("call counts stay within the representative bound") {
    CampaignConfig cfg;
    cfg.gen.seed = 5;
    cfg.runs = 40;
    auto full = run_campaign(*internal_adapter(false), cfg);
    auto again = run_campaign(*internal_adapter(false), cfg);
    const std::size_t c = 10;
    for (std::size_t i = 0; i < full.records.size(); ++i) {
      const auto& calls = full.records[i].verdict.calls;
      CHECK(calls.size() >= 1);
      CHECK(calls.size() <= 1 + (4 * c + 1) + 4 * c);
      CHECK(calls.size() == again.records[i].verdict.calls.size());
      for (const auto& call : calls) CHECK(call.seconds >= 0);
    }
  }

  TEST_CASE("summary text") {
    CampaignSummary s;
    s.tests = 4;
    s.max_size = 30;
    s.nonempty = 3;
    s.empty = 1;
    s.passed = 3;
    s.failed = {2};
    CHECK(s.str() == "#Tests 4\nMaxSize 30\n#NonEmpty 3\n#Empty 1\nAccuracy 75.0%\nTimeout 0\nFailed 2\n");
  }

  TEST_CASE("sized generation hits the requested sizes") {
    for (std::size_t target : {19, 60, 259, 499}) {
      auto tta = generate_sized_ptta(3, target);
      CHECK(tta.size() == target);
      CHECK(flatten(tta).size() == target);
      CHECK(write_tta(tta) == write_tta(generate_sized_ptta(3, target)));
    }
    CHECK_THROWS_AS(generate_sized_ptta(1, 3), Error);
  }

  TEST_CASE("every canonical interval behaves as predicted") {
    std::size_t instances = 0;
    for (std::uint64_t seed = 1; instances < 20; ++seed) {
      GenConfig g;
      g.seed = seed;
      g.max_depth = 3;
      auto tta = generate_random_ptta(g);
      auto predicted = intervals_to_bits(predict_intervals(tta), tta.ambient_c);
      if (predicted.none()) continue;
      ++instances;
      auto pta = ParametricTA::from(flatten(tta));
      for (std::size_t i = 0; i < interval_count(tta.ambient_c); ++i) {
        CAPTURE(seed);
        CAPTURE(i);
        CHECK(check_non_par_emptiness(pta, sample_of(tta.ambient_c, i)).nonempty == predicted.get(i));
      }
    }
  }

  TEST_CASE("external adapter: verdict parsing, garbage, timeouts") {
    auto tta = tree10();
    ExternalConfig says_empty;
    says_empty.command = "echo empty";
    says_empty.timeout_seconds = 10;
    Verdict v = test_tool(*external_adapter(says_empty), tta);
    CHECK_FALSE(v.passed);
    CHECK(v.label() == "fail");

    ExternalConfig garbage = says_empty;
    garbage.command = "printf 'nonempty\\nprefix: t0 / cycle: t999\\n'";
    v = test_tool(*external_adapter(garbage), tta);
    CHECK_FALSE(v.passed);
    CHECK(v.mode == VerdictMode::WitnessChecked);

    ExternalConfig mute = says_empty;
    mute.command = "true";
    v = test_tool(*external_adapter(mute), tta);
    CHECK(v.label() == "crash");

    ExternalConfig sleeper = says_empty;
    sleeper.command = "sleep 5; echo empty";
    sleeper.timeout_seconds = 0.5;
    auto start = std::chrono::steady_clock::now();
    v = test_tool(*external_adapter(sleeper), tta);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(4));
    CHECK(v.label() == "timeout");
    CHECK(v.mode == VerdictMode::ToolError);

    CHECK_THROWS_AS(make_adapter("bogus"), Error);
    CHECK_THROWS_AS(external_adapter(ExternalConfig{}), Error);
  }

  TEST_CASE("external adapter drives the command line checker") {
    ExternalConfig whole;
    whole.command = std::string(TTA_CLI_PATH) + " check {input}";
    whole.timeout_seconds = 60;
    ExternalConfig per_value = whole;
    per_value.mode = ExternalConfig::Mode::PerValue;
    for (std::uint64_t seed : {3, 4, 5, 6}) {
      GenConfig g;
      g.seed = seed;
      g.max_depth = 3;
      auto tta = generate_random_ptta(g);
      Verdict a = test_tool(*external_adapter(whole), tta);
      Verdict b = test_tool(*external_adapter(per_value), tta);
      CAPTURE(a.diagnostic);
      CAPTURE(b.diagnostic);
      CHECK(a.passed);
      CHECK(b.passed);
      CHECK(b.mode == VerdictMode::NonZeroWordsChecked);
      CHECK(a.calls.size() == 1);
      CHECK(a.calls[0].peak_kbytes > 0);
    }
  }
}

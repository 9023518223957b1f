#include <functional>
#include <random>

#include "doctest.h"
#include "tta/error.hpp"
#include "tta/weighted.hpp"

using namespace tta;

namespace {

// Natural numbers under + and *: not idempotent.
struct CountingSemiring {
  using Value = std::uint64_t;
  static constexpr bool idempotent = false;
  Value zero() const { return 0; }
  Value one() const { return 1; }
  Value plus(Value a, Value b) const { return a + b; }
  Value times(Value a, Value b) const { return a * b; }
};

BitWord random_word(std::mt19937_64& rng, std::size_t k, int density) {
  BitWord w(k);
  for (std::size_t i = 0; i < k; ++i) w.set(i, static_cast<int>(rng() % 100) < density);
  return w;
}

Price random_price(std::mt19937_64& rng) {
  if (rng() % 8 == 0) return Price::inf();
  return Price::of(rng() % 50);
}

template <class S, class Gen>
void check_axioms(const S& s, Gen gen) {
  for (int i = 0; i < 10000; ++i) {
    auto a = gen(), b = gen(), c = gen();
    REQUIRE(s.plus(s.plus(a, b), c) == s.plus(a, s.plus(b, c)));
    REQUIRE(s.plus(a, b) == s.plus(b, a));
    REQUIRE(s.plus(a, s.zero()) == a);
    REQUIRE(s.times(s.times(a, b), c) == s.times(a, s.times(b, c)));
    REQUIRE(s.times(a, s.one()) == a);
    REQUIRE(s.times(s.one(), a) == a);
    REQUIRE(s.times(a, s.plus(b, c)) == s.plus(s.times(a, b), s.times(a, c)));
    REQUIRE(s.times(s.plus(a, b), c) == s.plus(s.times(a, c), s.times(b, c)));
    REQUIRE(s.times(a, s.zero()) == s.zero());
    REQUIRE(s.times(s.zero(), a) == s.zero());
  }
}

// Plus over all paths from the initial state of at most max_len transitions.
template <class S>
typename S::Value enumerate_paths(const WeightedAutomaton<S>& wa, std::size_t max_len) {
  const S& s = wa.semiring();
  auto total = s.zero();
  std::function<void(std::size_t, typename S::Value, std::size_t)> go = [&](std::size_t q, typename S::Value w, std::size_t len) {
    if (wa.is_final(q)) total = s.plus(total, s.times(w, wa.final_weight(q)));
    if (len == max_len) return;
    for (const auto& [key, tw] : wa.transitions())
      if (std::get<0>(key) == q) go(std::get<2>(key), s.times(w, tw), len + 1);
  };
  go(wa.initial(), s.one(), 0);
  return total;
}

template <class S, class Gen>
WeightedAutomaton<S> random_wa(std::mt19937_64& rng, S s, std::size_t states, Gen gen) {
  WeightedAutomaton<S> wa(s);
  for (std::size_t i = 0; i < states; ++i) wa.add_state("q" + std::to_string(i));
  const std::size_t edges = rng() % (2 * states + 1);
  for (std::size_t e = 0; e < edges; ++e)
    wa.add_transition(rng() % states, rng() % 3 == 0 ? "b" : "a", rng() % states, gen());
  for (std::size_t i = 0; i < states; ++i)
    if (rng() % 3 == 0) wa.set_final(i, gen());
  return wa;
}

}  // namespace

TEST_SUITE("weighted") {
  TEST_CASE("semiring axioms") {
    std::mt19937_64 rng(11);
    check_axioms(BitSemiring{10}, [&] { return random_word(rng, 10, 50); });
    check_axioms(PriceSemiring{}, [&] { return random_price(rng); });
  }

  TEST_CASE("path weight") {
    WeightedAutomaton<PriceSemiring> wa;
    auto q0 = wa.add_state("q0"), q1 = wa.add_state("q1"), q2 = wa.add_state("q2");
    wa.add_transition(q0, "a", q1, Price::of(2));
    wa.add_transition(q1, "a", q2, Price::of(3));
    wa.set_final(q2, Price::of(4));
    wa.set_final(q0, Price::of(0));
    CHECK(path_weight(wa, {q0, q1, q2}, {"a", "a"}) == Price::of(9));
    CHECK(path_weight(wa, {q0}, {}) == Price::of(0));
    CHECK(path_weight(wa, {q0, q1}, {"a"}) == Price::inf());
    CHECK(path_weight(wa, {q0, q2}, {"a"}) == Price::inf());
    CHECK_THROWS_AS(path_weight(wa, {q1, q2}, {"a"}), Error);
  }

  TEST_CASE("behavior") {
    WeightedAutomaton<PriceSemiring> single;
    single.set_final(single.add_state("q"), Price::of(5));
    CHECK(behavior(single, {}) == Price::of(5));
    CHECK(behavior(single, {"a"}) == Price::inf());

    WeightedAutomaton<PriceSemiring> wa;
    auto q0 = wa.add_state("q0"), a = wa.add_state("a"), b = wa.add_state("b"), f = wa.add_state("f");
    wa.add_transition(q0, "x", a, Price::of(3));
    wa.add_transition(q0, "x", b, Price::of(5));
    wa.add_transition(a, "y", f, Price::of(0));
    wa.add_transition(b, "y", f, Price::of(0));
    wa.set_final(f, Price::of(0));
    CHECK(behavior(wa, {"x", "y"}) == Price::of(3));
    CHECK(behavior(wa, {"y", "x"}) == Price::inf());
  }

  TEST_CASE("parallel transitions combine with plus") {
    WeightedAutomaton<BitSemiring> wa(BitSemiring{4});
    auto q0 = wa.add_state("q0"), q1 = wa.add_state("q1");
    wa.add_transition(q0, "a", q1, BitWord::parse("1100"));
    wa.add_transition(q0, "a", q1, BitWord::parse("0010"));
    CHECK(wa.transition_weight(q0, "a", q1).str() == "1110");
    CHECK(wa.transition_weight(q1, "a", q0).str() == "0000");
  }

  TEST_CASE("shortest distance examples") {
    WeightedAutomaton<PriceSemiring> wa;
    auto q0 = wa.add_state("q0"), a = wa.add_state("A"), b = wa.add_state("B"), f = wa.add_state("f");
    wa.add_transition(q0, "a", a, Price::of(2));
    wa.add_transition(q0, "a", b, Price::of(1));
    wa.add_transition(a, "a", f, Price::of(1));
    wa.add_transition(b, "a", f, Price::of(3));
    wa.set_final(f, Price::of(0));
    CHECK(shortest_distance(wa) == Price::of(3));

    WeightedAutomaton<PriceSemiring> unreachable;
    auto u0 = unreachable.add_state("q0"), u1 = unreachable.add_state("q1");
    unreachable.add_transition(u1, "a", u0, Price::of(1));
    unreachable.set_final(u1, Price::of(0));
    CHECK(shortest_distance(unreachable) == Price::inf());

    const std::int64_t c = 2;
    WeightedAutomaton<BitSemiring> single(BitSemiring{interval_count(c)});
    BitWord w = intervals_to_bits(IntervalSet::parse("(2, 4]"), c);
    single.set_final(single.add_state("T0"), w);
    CHECK(shortest_distance(single) == w);
    CHECK(enumerate_paths(single, 3) == w);
  }

  TEST_CASE("non-zero words") {
    const std::int64_t c = 2;
    BitSemiring s{interval_count(c)};
    WeightedAutomaton<BitSemiring> disjoint(s);
    auto q0 = disjoint.add_state("q0"), q1 = disjoint.add_state("q1");
    disjoint.add_transition(q0, "a", q1, intervals_to_bits(IntervalSet::parse("(0, 1)"), c));
    disjoint.set_final(q1, intervals_to_bits(IntervalSet::parse("(2, +inf)"), c));
    CHECK_FALSE(non_zero_words(disjoint));
    disjoint.set_final(q1, intervals_to_bits(IntervalSet::parse("[1/2, 3]"), c));
    CHECK(non_zero_words(disjoint));
    CHECK(bits_to_intervals(shortest_distance(disjoint), c).str() == "[1/2, 1)");

    WeightedAutomaton<BitSemiring> no_final(s);
    no_final.add_state("q0");
    CHECK_FALSE(non_zero_words(no_final));
  }

  TEST_CASE("non-idempotent semiring is refused") {
    WeightedAutomaton<CountingSemiring> wa;
    wa.set_final(wa.add_state("q"), 1);
    CHECK(behavior(wa, {}) == 1);
    try {
      shortest_distance(wa);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Unsupported);
    }
  }

  TEST_CASE("shortest distance matches path enumeration") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 400; ++iter) {
      const std::size_t n = 1 + rng() % 5;
      auto bits = random_wa(rng, BitSemiring{10}, n, [&] { return random_word(rng, 10, 70); });
      auto d = shortest_distance(bits);
      REQUIRE(enumerate_paths(bits, n) == d);
      REQUIRE(enumerate_paths(bits, 2 * n) == d);

      auto prices = random_wa(rng, PriceSemiring{}, n, [&] { return random_price(rng); });
      auto p = shortest_distance(prices);
      REQUIRE(enumerate_paths(prices, n) == p);
      REQUIRE(enumerate_paths(prices, 2 * n) == p);
    }
  }

  TEST_CASE("behaviors of short words are absorbed by the shortest distance") {
    std::mt19937_64 rng(9);
    for (int iter = 0; iter < 200; ++iter) {
      const std::size_t n = 1 + rng() % 4;
      BitSemiring s{10};
      auto wa = random_wa(rng, s, n, [&] { return random_word(rng, 10, 60); });
      auto d = shortest_distance(wa);
      std::vector<std::vector<std::string>> words{{}};
      auto acc = s.zero();
      for (std::size_t len = 0; len <= 4; ++len) {
        std::vector<std::vector<std::string>> next;
        for (const auto& y : words) {
          acc = s.plus(acc, behavior(wa, y));
          for (const char* a : {"a", "b"}) {
            auto z = y;
            z.push_back(a);
            next.push_back(z);
          }
        }
        words = std::move(next);
      }
      REQUIRE(s.plus(d, acc) == d);
    }
  }
}

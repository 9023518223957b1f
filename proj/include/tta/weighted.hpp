#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "tta/error.hpp"
#include "tta/semiring.hpp"

namespace tta {

// Finite-word weighted automaton. Absent transitions weigh zero; parallel
// transitions with the same letter are combined with plus.
template <class S>
class WeightedAutomaton {
 public:
  using Value = typename S::Value;

  explicit WeightedAutomaton(S semiring = S{}) : semiring_(semiring) {}

  const S& semiring() const { return semiring_; }

  std::size_t add_state(const std::string& name) {
    states_.push_back(name);
    return states_.size() - 1;
  }
  std::size_t state_count() const { return states_.size(); }
  const std::string& state_name(std::size_t q) const { return states_.at(q); }
  std::optional<std::size_t> find_state(const std::string& name) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (states_[i] == name) return i;
    return std::nullopt;
  }

  void set_initial(std::size_t q) {
    check_state(q);
    initial_ = q;
  }
  std::size_t initial() const { return initial_; }

  std::size_t letter(const std::string& name) {
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
      if (alphabet_[i] == name) return i;
    alphabet_.push_back(name);
    return alphabet_.size() - 1;
  }
  const std::vector<std::string>& alphabet() const { return alphabet_; }

  void add_transition(std::size_t src, const std::string& a, std::size_t dst, const Value& w) {
    check_state(src);
    check_state(dst);
    auto key = std::make_tuple(src, letter(a), dst);
    auto it = transitions_.find(key);
    if (it == transitions_.end())
      transitions_.emplace(key, w);
    else
      it->second = semiring_.plus(it->second, w);
  }
  Value transition_weight(std::size_t src, const std::string& a, std::size_t dst) const {
    for (std::size_t l = 0; l < alphabet_.size(); ++l)
      if (alphabet_[l] == a) {
        auto it = transitions_.find(std::make_tuple(src, l, dst));
        if (it != transitions_.end()) return it->second;
      }
    return semiring_.zero();
  }
  // (src, letter index, dst) -> weight
  const std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Value>& transitions() const { return transitions_; }

  void set_final(std::size_t q, const Value& w) {
    check_state(q);
    finals_.insert_or_assign(q, w);
  }
  bool is_final(std::size_t q) const { return finals_.count(q) != 0; }
  Value final_weight(std::size_t q) const {
    auto it = finals_.find(q);
    return it == finals_.end() ? semiring_.zero() : it->second;
  }
  const std::map<std::size_t, Value>& finals() const { return finals_; }

 private:
  void check_state(std::size_t q) const {
    if (q >= states_.size()) fail(ErrorKind::Invalid, "weighted automaton state out of range");
  }

  S semiring_;
  std::vector<std::string> states_;
  std::size_t initial_ = 0;
  std::vector<std::string> alphabet_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Value> transitions_;
  std::map<std::size_t, Value> finals_;
};

// Weight of q0 y1 q1 ... yn qn; states.size() == letters.size() + 1.
template <class S>
typename S::Value path_weight(const WeightedAutomaton<S>& wa, const std::vector<std::size_t>& states,
                              const std::vector<std::string>& letters) {
  const S& s = wa.semiring();
  if (states.empty() || states.size() != letters.size() + 1) fail(ErrorKind::Invalid, "path needs one more state than letters");
  if (states.front() != wa.initial()) fail(ErrorKind::Invalid, "path must start at the initial state");
  if (!wa.is_final(states.back())) return s.zero();
  auto w = s.one();
  for (std::size_t i = 0; i < letters.size(); ++i) w = s.times(w, wa.transition_weight(states[i], letters[i], states[i + 1]));
  return s.times(w, wa.final_weight(states.back()));
}

template <class S>
typename S::Value behavior(const WeightedAutomaton<S>& wa, const std::vector<std::string>& word) {
  const S& s = wa.semiring();
  const std::size_t n = wa.state_count();
  if (n == 0) return s.zero();
  std::vector<typename S::Value> cur(n, s.zero());
  cur[wa.initial()] = s.one();
  for (const auto& a : word) {
    std::vector<typename S::Value> next(n, s.zero());
    std::optional<std::size_t> l;
    for (std::size_t i = 0; i < wa.alphabet().size(); ++i)
      if (wa.alphabet()[i] == a) l = i;
    if (!l) return s.zero();
    for (const auto& [key, w] : wa.transitions()) {
      auto [src, letter, dst] = key;
      if (letter == *l) next[dst] = s.plus(next[dst], s.times(cur[src], w));
    }
    cur = std::move(next);
  }
  auto total = s.zero();
  for (const auto& [q, w] : wa.finals()) total = s.plus(total, s.times(cur[q], w));
  return total;
}

// Plus over the weights of all accepting paths. Uses all-pairs closure with
// star(s) = one, which is exact for OR/AND bit words and for min-plus on
// naturals; the result is then checked to be a fixpoint of one relaxation round.
template <class S>
typename S::Value shortest_distance(const WeightedAutomaton<S>& wa) {
  if constexpr (!S::idempotent) {
    fail(ErrorKind::Unsupported, "shortest distance needs an idempotent semiring");
  } else {
    const S& s = wa.semiring();
    const std::size_t n = wa.state_count();
    if (n == 0) return s.zero();
    std::vector<std::vector<typename S::Value>> d(n, std::vector<typename S::Value>(n, s.zero()));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = s.one();
    for (const auto& [key, w] : wa.transitions()) {
      auto [src, letter, dst] = key;
      (void)letter;
      d[src][dst] = s.plus(d[src][dst], w);
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        if (d[i][k] == s.zero()) continue;
        for (std::size_t j = 0; j < n; ++j) d[i][j] = s.plus(d[i][j], s.times(d[i][k], d[k][j]));
      }
    const auto& row = d[wa.initial()];
    if (!(s.plus(row[wa.initial()], s.one()) == row[wa.initial()])) fail(ErrorKind::Internal, "closure lost the empty path");
    for (const auto& [key, w] : wa.transitions()) {
      auto [src, letter, dst] = key;
      (void)letter;
      if (!(s.plus(row[dst], s.times(row[src], w)) == row[dst])) fail(ErrorKind::Internal, "closure is not a fixpoint");
    }
    auto total = s.zero();
    for (const auto& [q, w] : wa.finals()) total = s.plus(total, s.times(row[q], w));
    return total;
  }
}

inline bool non_zero_words(const WeightedAutomaton<BitSemiring>& wa) { return !shortest_distance(wa).none(); }

}  // namespace tta

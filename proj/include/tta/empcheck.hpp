#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tta/automaton.hpp"
#include "tta/emptiness.hpp"

namespace tta {

// Parameter values that decide emptiness of a parametric automaton with largest constant C and
// `locations` locations: a large value xi beyond every interesting constant, the half-integers
// 0, 1/2, ..., 2C, and one point n/2 + alpha inside each open interval (n/2, (n+1)/2).
struct Representatives {
  Rational xi;
  Rational alpha;
  std::vector<Rational> half_integers;
  std::vector<Rational> midpoints;
};

Representatives compute_representatives(std::int64_t max_const, std::size_t locations);

// Substitutes the value, scales to integers and forces strictly increasing time.
TimedAutomaton prepare_for_check(const ParametricTA& pta, const Rational& value);
// prepare_for_check followed by the Buechi check.
BuchiResult check_non_par_emptiness(const ParametricTA& pta, const Rational& value,
                                    const BuchiOptions& options = {});

struct CallRecord {
  std::size_t index = 0;
  Rational value;
  bool nonempty = false;
  double seconds = 0;
  long peak_kbytes = 0;
};

struct EmpOptions {
  bool fast = false;  // stop at the first accepting value
  BuchiOptions buchi;
  std::function<void(const CallRecord&)> on_call;
  // Replaces check_non_par_emptiness for each representative.
  std::function<BuchiResult(const ParametricTA&, const Rational&)> checker;
};

struct EmpResult {
  bool nonempty = false;
  std::vector<std::pair<Rational, bool>> verified;  // in call order
  bool exhaustive = false;                          // every representative was checked
  std::optional<Witness> witness;                   // from the first accepting value
  std::optional<Rational> witness_value;
};

EmpResult emp_check(const ParametricTA& pta, const EmpOptions& options = {});

// Peak resident set size of this process in kilobytes.
long peak_rss_kbytes();

}  // namespace tta

#include "tta/empcheck.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>

namespace tta {

long peak_rss_kbytes() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return u.ru_maxrss;
}

Representatives compute_representatives(std::int64_t c, std::size_t locations) {
  if (c < 0) fail(ErrorKind::Invalid, "negative largest constant");
  const auto q = static_cast<std::int64_t>(locations);
  Representatives r;
  // xi must exceed 1 + C(1 + |Q|); taking also 2C + 1 keeps it beyond every half-integer.
  r.xi = Rational(std::max(2 * c, 1 + c * (1 + q)) + 1);
  // alpha must stay below 1 / (4 (1 + C max(|Q|, 4C))); half of that bound is used.
  r.alpha = c == 0 ? Rational(1, 8) : Rational(1, 8 * (1 + c * std::max(q, 4 * c)));
  for (std::int64_t n = 0; n <= 4 * c; ++n) r.half_integers.push_back(Rational(n, 2));
  for (std::int64_t n = 0; n < 4 * c; ++n) r.midpoints.push_back(Rational(n, 2) + r.alpha);
  return r;
}

TimedAutomaton prepare_for_check(const ParametricTA& pta, const Rational& value) {
  return enforce_strict_monotonicity(scale_to_integers(substitute_parameter(pta, value)).first);
}

BuchiResult check_non_par_emptiness(const ParametricTA& pta, const Rational& value, const BuchiOptions& options) {
  return buchi_emptiness(prepare_for_check(pta, value), options);
}

EmpResult emp_check(const ParametricTA& pta, const EmpOptions& options) {
  const auto reps = compute_representatives(max_constant(pta.ta()), pta.ta().locations.size());
  EmpResult result;

  auto check = [&](const Rational& v) {
    auto start = std::chrono::steady_clock::now();
    BuchiResult b = options.checker ? options.checker(pta, v) : check_non_par_emptiness(pta, v, options.buchi);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.on_call) options.on_call(CallRecord{result.verified.size(), v, b.nonempty, secs, peak_rss_kbytes()});
    result.verified.emplace_back(v, b.nonempty);
    if (b.nonempty && !result.nonempty) {
      result.nonempty = true;
      result.witness = b.witness;
      result.witness_value = v;
    }
    return b.nonempty;
  };
  const std::size_t total = 1 + reps.half_integers.size() + reps.midpoints.size();

  check(reps.xi);
  if (options.fast && result.nonempty) return result;
  for (const auto& v : reps.half_integers) {
    check(v);
    if (options.fast && result.nonempty) return result;
  }
  if (!result.nonempty) {
    for (const auto& v : reps.midpoints) {
      check(v);
      if (options.fast && result.nonempty) break;
    }
  }
  result.exhaustive = result.verified.size() == total;
  return result;
}

}  // namespace tta

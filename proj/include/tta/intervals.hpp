#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tta/rational.hpp"

namespace tta {

// Non-empty interval of non-negative rationals; the upper end may be +inf.
struct Interval {
  Rational lo;
  bool lo_closed = true;
  bool hi_infinite = false;
  Rational hi;
  bool hi_closed = true;

  static Interval point(const Rational& r) { return Interval{r, true, false, r, true}; }
  static Interval open(const Rational& a, const Rational& b) { return Interval{a, false, false, b, false}; }
  static Interval above(const Rational& a, bool closed) { return Interval{a, closed, true, Rational(0), false}; }

  bool is_empty() const;
  bool contains(const Rational& r) const;
  std::string str() const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of intervals, kept sorted, disjoint and with touching pieces merged.
class IntervalSet {
 public:
  IntervalSet() = default;
  static IntervalSet of(const Interval& i);
  static IntervalSet all() { return of(Interval::above(Rational(0), true)); }

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  bool contains(const Rational& r) const;
  bool is_empty() const { return parts_.empty(); }
  const std::vector<Interval>& parts() const { return parts_; }

  // "(0, 1/2) ∪ {1} ∪ [3/2, +inf)" or "empty"
  std::string str() const;
  // Also accepts "U" or ";" as separators, "inf"/"+inf" and "∅".
  static IntervalSet parse(const std::string& text);

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize();
  std::vector<Interval> parts_;
};

// Fixed-length bit vector; bit 0 is printed first.
class BitWord {
 public:
  BitWord() = default;
  explicit BitWord(std::size_t k, bool value = false) : bits_(k, value) {}
  static BitWord parse(const std::string& text);

  std::size_t size() const { return bits_.size(); }
  bool get(std::size_t i) const { return bits_.at(i); }
  void set(std::size_t i, bool v = true) { bits_.at(i) = v; }
  bool none() const;
  bool all() const;

  BitWord operator|(const BitWord& o) const;
  BitWord operator&(const BitWord& o) const;
  friend bool operator==(const BitWord&, const BitWord&) = default;
  std::string str() const;

 private:
  std::vector<bool> bits_;
};

// The 8C + 2 intervals {0}, (0, 1/2), {1/2}, ..., {2C}, (2C, +inf) indexed from 0.
std::size_t interval_count(std::int64_t max_const);
Interval canonical_interval(std::int64_t max_const, std::size_t index);

IntervalSet bits_to_intervals(const BitWord& w, std::int64_t max_const);
// Fails unless the set is a union of canonical intervals for this C.
BitWord intervals_to_bits(const IntervalSet& s, std::int64_t max_const);

}  // namespace tta

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace tta {

// Difference bound: entry (i, j) bounds x_i - x_j. Encoded as 2*c + (weak ? 1 : 0),
// so that a smaller raw value is always a tighter bound.
using raw_t = std::int64_t;

constexpr raw_t kInfinity = std::numeric_limits<raw_t>::max();
constexpr raw_t bound(std::int64_t c, bool strict) { return c * 2 + (strict ? 0 : 1); }
constexpr std::int64_t kNoBound = -(std::int64_t{1} << 40);
constexpr raw_t kLeZero = bound(0, false);
constexpr raw_t kLtZero = bound(0, true);
constexpr std::int64_t bound_value(raw_t b) { return b >> 1; }
constexpr bool bound_strict(raw_t b) { return (b & 1) == 0; }

constexpr raw_t bound_add(raw_t a, raw_t b) {
  if (a == kInfinity || b == kInfinity) return kInfinity;
  return ((bound_value(a) + bound_value(b)) << 1) | (a & b & 1);
}

// Canonical DBM over clocks 1..n (index 0 is the constant zero clock).
class Dbm {
 public:
  explicit Dbm(std::size_t clocks);  // universe: all clocks >= 0
  static Dbm zero(std::size_t clocks);

  std::size_t dim() const { return dim_; }
  raw_t at(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }
  bool is_empty() const { return empty_; }

  // Intersects with x_i - x_j (<|<=) c. Keeps the matrix canonical.
  bool constrain(std::size_t i, std::size_t j, raw_t b);
  void up();
  void reset(std::size_t clock);
  void extrapolate(std::int64_t max_constant);
  // Extra+ with separate lower and upper bounds per clock; index 0 is the zero clock. Use
  // kNoBound for clocks never compared in that direction.
  void extrapolate_lu(const std::vector<std::int64_t>& lower, const std::vector<std::int64_t>& upper);

  bool includes(const Dbm& other) const;  // other is a subset of this
  bool operator==(const Dbm& other) const { return empty_ == other.empty_ && m_ == other.m_; }
  std::size_t hash() const;
  std::string str() const;

 private:
  void close();
  raw_t& ref(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }

  std::size_t dim_;
  bool empty_ = false;
  std::vector<raw_t> m_;
};

}  // namespace tta

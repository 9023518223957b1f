#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "tta/intervals.hpp"

namespace tta {

// (B_k, OR, AND, 0^k, 1^k)
struct BitSemiring {
  using Value = BitWord;
  static constexpr bool idempotent = true;
  std::size_t k = 0;

  Value zero() const { return BitWord(k, false); }
  Value one() const { return BitWord(k, true); }
  Value plus(const Value& a, const Value& b) const { return a | b; }
  Value times(const Value& a, const Value& b) const { return a & b; }
  static std::string str(const Value& v) { return v.str(); }
};

// Natural number or +inf.
struct Price {
  bool infinite = true;
  std::uint64_t value = 0;

  static Price inf() { return Price{}; }
  static Price of(std::uint64_t v) { return Price{false, v}; }
  std::string str() const { return infinite ? "inf" : std::to_string(value); }
  friend bool operator==(const Price&, const Price&) = default;
  friend bool operator<(const Price& a, const Price& b) {
    if (a.infinite) return false;
    return b.infinite || a.value < b.value;
  }
};

// (N ∪ {+inf}, min, +, +inf, 0)
struct PriceSemiring {
  using Value = Price;
  static constexpr bool idempotent = true;

  Value zero() const { return Price::inf(); }
  Value one() const { return Price::of(0); }
  Value plus(const Value& a, const Value& b) const { return b < a ? b : a; }
  Value times(const Value& a, const Value& b) const;
  static std::string str(const Value& v) { return v.str(); }
};

}  // namespace tta

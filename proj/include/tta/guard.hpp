#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tta/rational.hpp"

namespace tta {

enum class Cmp { Lt, Le, Eq, Ge, Gt };

const char* cmp_symbol(Cmp c);
Cmp negate_upper(Cmp c);

// clock ~ constant, or clock ~ parameter when `parametric` is set.
struct Atom {
  std::size_t clock = 0;
  Cmp cmp = Cmp::Eq;
  bool parametric = false;
  Rational constant;

  friend bool operator==(const Atom&, const Atom&) = default;
};

using Clause = std::vector<Atom>;

// Disjunctive normal form. No clauses means false, a single empty clause means true.
struct Guard {
  std::vector<Clause> clauses;

  static Guard top() { return Guard{{Clause{}}}; }
  static Guard bottom() { return Guard{}; }
  static Guard atom(const Atom& a) { return Guard{{Clause{a}}}; }

  bool is_true() const;
  bool is_false() const { return clauses.empty(); }

  Guard conj(const Guard& other) const;
  Guard disj(const Guard& other) const;
  Guard negate() const;

  friend bool operator==(const Guard&, const Guard&) = default;
};

// Guard syntax tree over the primitive atoms (< and =) with negation and conjunction.
// Everything else (<=, >, >=, !=, or) is sugar expressed with these two connectives.
class GuardExpr {
 public:
  enum class Kind { True, Atom, Not, And };

  static GuardExpr truth();
  static GuardExpr lt(std::size_t clock, Rational c);
  static GuardExpr eq(std::size_t clock, Rational c);
  static GuardExpr lt_param(std::size_t clock);
  static GuardExpr eq_param(std::size_t clock);
  static GuardExpr negation(GuardExpr e);
  static GuardExpr conjunction(GuardExpr a, GuardExpr b);

  static GuardExpr le(std::size_t clock, Rational c);
  static GuardExpr gt(std::size_t clock, Rational c);
  static GuardExpr ge(std::size_t clock, Rational c);
  static GuardExpr disjunction(GuardExpr a, GuardExpr b);

  Kind kind() const { return kind_; }
  Guard normalize() const;
  bool evaluate(const std::vector<Rational>& valuation, const std::optional<Rational>& param) const;

 private:
  Kind kind_ = Kind::True;
  Atom atom_{};
  std::shared_ptr<const GuardExpr> lhs_, rhs_;
};

std::vector<std::size_t> clocks_of(const Guard& g);
bool mentions_parameter(const Guard& g);

bool holds(const Atom& a, const std::vector<Rational>& valuation, const std::optional<Rational>& param);
bool holds(const Clause& c, const std::vector<Rational>& valuation, const std::optional<Rational>& param);
bool holds(const Guard& g, const std::vector<Rational>& valuation, const std::optional<Rational>& param);

std::string clause_to_string(const Clause& c, const std::vector<std::string>& clocks, const std::string& param);
std::string guard_to_string(const Guard& g, const std::vector<std::string>& clocks, const std::string& param);

}  // namespace tta

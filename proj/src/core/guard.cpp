#include "tta/guard.hpp"

#include <algorithm>

namespace tta {

const char* cmp_symbol(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Eq: return "==";
    case Cmp::Ge: return ">=";
    case Cmp::Gt: return ">";
  }
  return "?";
}

namespace {

Guard simplify(const Guard& g);

// Negation of a single atom, as a disjunction of atoms.
std::vector<Atom> negate_atom(const Atom& a) {
  Atom b = a;
  switch (a.cmp) {
    case Cmp::Lt: b.cmp = Cmp::Ge; return {b};
    case Cmp::Le: b.cmp = Cmp::Gt; return {b};
    case Cmp::Ge: b.cmp = Cmp::Lt; return {b};
    case Cmp::Gt: b.cmp = Cmp::Le; return {b};
    case Cmp::Eq: {
      Atom c = a;
      b.cmp = Cmp::Lt;
      c.cmp = Cmp::Gt;
      return {b, c};
    }
  }
  return {};
}

}  // namespace

Cmp negate_upper(Cmp c) {
  switch (c) {
    case Cmp::Lt: return Cmp::Ge;
    case Cmp::Le: return Cmp::Gt;
    case Cmp::Ge: return Cmp::Lt;
    case Cmp::Gt: return Cmp::Le;
    case Cmp::Eq: return Cmp::Eq;
  }
  return c;
}

bool Guard::is_true() const {
  return std::any_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.empty(); });
}

Guard Guard::conj(const Guard& other) const {
  Guard out;
  for (const auto& a : clauses)
    for (const auto& b : other.clauses) {
      Clause c = a;
      for (const auto& atom : b)
        if (std::find(c.begin(), c.end(), atom) == c.end()) c.push_back(atom);
      out.clauses.push_back(std::move(c));
    }
  return simplify(out);
}

Guard Guard::disj(const Guard& other) const {
  Guard out = *this;
  for (const auto& c : other.clauses)
    if (std::find(out.clauses.begin(), out.clauses.end(), c) == out.clauses.end()) out.clauses.push_back(c);
  return out;
}

Guard Guard::negate() const {
  Guard out = top();
  for (const auto& clause : clauses) {
    Guard neg = bottom();
    for (const auto& a : clause)
      for (const auto& n : negate_atom(a)) neg.clauses.push_back(Clause{n});
    out = out.conj(neg);
    if (out.is_false()) break;
  }
  return out;
}

GuardExpr GuardExpr::truth() { return GuardExpr{}; }

GuardExpr GuardExpr::lt(std::size_t clock, Rational c) {
  GuardExpr e;
  e.kind_ = Kind::Atom;
  e.atom_ = Atom{clock, Cmp::Lt, false, c};
  return e;
}

GuardExpr GuardExpr::eq(std::size_t clock, Rational c) {
  GuardExpr e = lt(clock, c);
  e.atom_.cmp = Cmp::Eq;
  return e;
}

GuardExpr GuardExpr::lt_param(std::size_t clock) {
  GuardExpr e = lt(clock, 0);
  e.atom_.parametric = true;
  return e;
}

GuardExpr GuardExpr::eq_param(std::size_t clock) {
  GuardExpr e = eq(clock, 0);
  e.atom_.parametric = true;
  return e;
}

GuardExpr GuardExpr::negation(GuardExpr inner) {
  GuardExpr e;
  e.kind_ = Kind::Not;
  e.lhs_ = std::make_shared<const GuardExpr>(std::move(inner));
  return e;
}

GuardExpr GuardExpr::conjunction(GuardExpr a, GuardExpr b) {
  GuardExpr e;
  e.kind_ = Kind::And;
  e.lhs_ = std::make_shared<const GuardExpr>(std::move(a));
  e.rhs_ = std::make_shared<const GuardExpr>(std::move(b));
  return e;
}

GuardExpr GuardExpr::le(std::size_t clock, Rational c) { return negation(gt(clock, c)); }

GuardExpr GuardExpr::gt(std::size_t clock, Rational c) {
  return conjunction(negation(lt(clock, c)), negation(eq(clock, c)));
}

GuardExpr GuardExpr::ge(std::size_t clock, Rational c) { return negation(lt(clock, c)); }

GuardExpr GuardExpr::disjunction(GuardExpr a, GuardExpr b) {
  return negation(conjunction(negation(std::move(a)), negation(std::move(b))));
}

namespace {

bool same_operand(const Atom& a, const Atom& b) {
  return a.clock == b.clock && a.parametric == b.parametric && (a.parametric || a.constant == b.constant);
}

// Meet of two comparisons against the same operand. Returns false when the pair is contradictory.
bool meet(Cmp a, Cmp b, Cmp& out) {
  auto lower = [](Cmp c) { return c == Cmp::Ge || c == Cmp::Gt; };
  auto upper = [](Cmp c) { return c == Cmp::Le || c == Cmp::Lt; };
  if (a == b) {
    out = a;
    return true;
  }
  if (a == Cmp::Eq || b == Cmp::Eq) {
    Cmp o = a == Cmp::Eq ? b : a;
    out = Cmp::Eq;
    return o == Cmp::Ge || o == Cmp::Le;
  }
  if (lower(a) && lower(b)) {
    out = Cmp::Gt;
    return true;
  }
  if (upper(a) && upper(b)) {
    out = Cmp::Lt;
    return true;
  }
  // one lower, one upper bound on the same value
  if ((a == Cmp::Ge && b == Cmp::Le) || (a == Cmp::Le && b == Cmp::Ge)) {
    out = Cmp::Eq;
    return true;
  }
  return false;
}

bool simplify_clause(Clause& c) {
  Clause out;
  for (const auto& atom : c) {
    bool merged = false;
    for (auto& o : out)
      if (same_operand(o, atom)) {
        if (!meet(o.cmp, atom.cmp, o.cmp)) return false;
        merged = true;
        break;
      }
    if (!merged) out.push_back(atom);
  }
  c = std::move(out);
  return true;
}

// x < c || x == c  ->  x <= c, when the rest of both clauses agree.
bool join_pair(const Clause& a, const Clause& b, Clause& out) {
  if (a.size() != b.size()) return false;
  std::size_t diff = a.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) {
      if (diff != a.size()) return false;
      diff = i;
    }
  if (diff == a.size() || !same_operand(a[diff], b[diff])) return false;
  Cmp x = a[diff].cmp, y = b[diff].cmp;
  Cmp joined;
  if ((x == Cmp::Lt && y == Cmp::Eq) || (x == Cmp::Eq && y == Cmp::Lt)) joined = Cmp::Le;
  else if ((x == Cmp::Gt && y == Cmp::Eq) || (x == Cmp::Eq && y == Cmp::Gt)) joined = Cmp::Ge;
  else return false;
  out = a;
  out[diff].cmp = joined;
  return true;
}

}  // namespace

namespace {

Guard simplify(const Guard& g) {
  Guard out;
  for (Clause c : g.clauses) {
    if (!simplify_clause(c)) continue;
    if (c.empty()) return Guard::top();
    if (std::find(out.clauses.begin(), out.clauses.end(), c) == out.clauses.end()) out.clauses.push_back(c);
  }
  // drop clauses implied syntactically by a smaller one
  for (std::size_t i = 0; i < out.clauses.size(); ++i)
    for (std::size_t j = 0; j < out.clauses.size(); ++j) {
      if (i == j || out.clauses[i].size() > out.clauses[j].size()) continue;
      const auto& small = out.clauses[i];
      const auto& large = out.clauses[j];
      bool subset = std::all_of(small.begin(), small.end(),
                                [&](const Atom& a) { return std::find(large.begin(), large.end(), a) != large.end(); });
      if (subset) {
        out.clauses.erase(out.clauses.begin() + static_cast<std::ptrdiff_t>(j));
        if (j < i) --i;
        j = static_cast<std::size_t>(-1);
      }
    }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < out.clauses.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < out.clauses.size() && !changed; ++j) {
        Clause joined;
        if (join_pair(out.clauses[i], out.clauses[j], joined)) {
          out.clauses[i] = joined;
          out.clauses.erase(out.clauses.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
  }
  return out;
}

}  // namespace

Guard GuardExpr::normalize() const {
  switch (kind_) {
    case Kind::True: return Guard::top();
    case Kind::Atom: return Guard::atom(atom_);
    case Kind::And: return simplify(lhs_->normalize().conj(rhs_->normalize()));
    case Kind::Not: return simplify(lhs_->normalize().negate());
  }
  return Guard::top();
}

bool GuardExpr::evaluate(const std::vector<Rational>& valuation, const std::optional<Rational>& param) const {
  switch (kind_) {
    case Kind::True: return true;
    case Kind::Atom: return holds(atom_, valuation, param);
    case Kind::Not: return !lhs_->evaluate(valuation, param);
    case Kind::And: return lhs_->evaluate(valuation, param) && rhs_->evaluate(valuation, param);
  }
  return false;
}

std::vector<std::size_t> clocks_of(const Guard& g) {
  std::vector<std::size_t> out;
  for (const auto& c : g.clauses)
    for (const auto& a : c) out.push_back(a.clock);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool mentions_parameter(const Guard& g) {
  for (const auto& c : g.clauses)
    for (const auto& a : c)
      if (a.parametric) return true;
  return false;
}

bool holds(const Atom& a, const std::vector<Rational>& valuation, const std::optional<Rational>& param) {
  if (a.parametric && !param) fail(ErrorKind::Invalid, "parametric atom evaluated without a parameter value");
  const Rational& v = valuation.at(a.clock);
  const Rational& c = a.parametric ? *param : a.constant;
  switch (a.cmp) {
    case Cmp::Lt: return v < c;
    case Cmp::Le: return v <= c;
    case Cmp::Eq: return v == c;
    case Cmp::Ge: return v >= c;
    case Cmp::Gt: return v > c;
  }
  return false;
}

bool holds(const Clause& c, const std::vector<Rational>& valuation, const std::optional<Rational>& param) {
  return std::all_of(c.begin(), c.end(), [&](const Atom& a) { return holds(a, valuation, param); });
}

bool holds(const Guard& g, const std::vector<Rational>& valuation, const std::optional<Rational>& param) {
  return std::any_of(g.clauses.begin(), g.clauses.end(),
                     [&](const Clause& c) { return holds(c, valuation, param); });
}

std::string clause_to_string(const Clause& c, const std::vector<std::string>& clocks, const std::string& param) {
  if (c.empty()) return "true";
  std::string out;
  for (const auto& a : c) {
    if (!out.empty()) out += " && ";
    out += clocks.at(a.clock);
    out += ' ';
    out += cmp_symbol(a.cmp);
    out += ' ';
    out += a.parametric ? param : a.constant.str();
  }
  return out;
}

std::string guard_to_string(const Guard& g, const std::vector<std::string>& clocks, const std::string& param) {
  if (g.clauses.empty()) return "false";
  if (g.clauses.size() == 1) return clause_to_string(g.clauses[0], clocks, param);
  std::string out;
  for (const auto& c : g.clauses) {
    if (!out.empty()) out += " || ";
    out += "(" + clause_to_string(c, clocks, param) + ")";
  }
  return out;
}

}  // namespace tta

#include "tta/text_format.hpp"

#include <algorithm>

#include "ta_lines.hpp"

namespace tta {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_and(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t p = s.find("&&", start);
    parts.push_back(trim(s.substr(start, p == std::string::npos ? std::string::npos : p - start)));
    if (p == std::string::npos) break;
    start = p + 2;
  }
  return parts;
}

Guard parse_comparison(const std::string& text, const TimedAutomaton& ta) {
  static const char* ops[] = {"<=", ">=", "==", "!=", "<", ">", "="};
  for (const char* op : ops) {
    std::size_t p = text.find(op);
    if (p == std::string::npos) continue;
    std::string lhs = trim(text.substr(0, p));
    std::string rhs = trim(text.substr(p + std::string(op).size()));
    auto clock = ta.find_clock(lhs);
    if (!clock) fail(ErrorKind::Parse, "unknown clock '" + lhs + "' in guard");
    Atom a;
    a.clock = *clock;
    if (ta.parameter && rhs == *ta.parameter) {
      a.parametric = true;
    } else {
      a.constant = Rational::parse(rhs);
      if (a.constant < 0) fail(ErrorKind::Parse, "negative constant in guard");
    }
    std::string o = op;
    if (o == "!=") {
      Atom lo = a, hi = a;
      lo.cmp = Cmp::Lt;
      hi.cmp = Cmp::Gt;
      return Guard::atom(lo).disj(Guard::atom(hi));
    }
    a.cmp = o == "<" ? Cmp::Lt : o == "<=" ? Cmp::Le : (o == "==" || o == "=") ? Cmp::Eq : o == ">=" ? Cmp::Ge : Cmp::Gt;
    return Guard::atom(a);
  }
  fail(ErrorKind::Parse, "bad comparison '" + text + "'");
}

}  // namespace

Guard parse_guard(const std::string& expr, const TimedAutomaton& context) {
  Guard g = Guard::top();
  for (const auto& part : split_and(expr)) {
    if (part.empty()) fail(ErrorKind::Parse, "empty conjunct in guard \"" + expr + "\"");
    if (part == "true") continue;
    if (part == "false") return Guard::bottom();
    g = g.conj(parse_comparison(part, context));
  }
  return g;
}

std::string write_guard_clause(const Clause& c, const TimedAutomaton& context) {
  return clause_to_string(c, context.clocks, context.parameter.value_or("?"));
}

namespace detail {

std::vector<std::size_t> resolve_resets(const TimedAutomaton& ta, const std::vector<std::string>& names, int line) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    auto c = ta.find_clock(n);
    if (!c) parse_error(line, "unknown clock '" + n + "' in resets");
    out.push_back(*c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool apply_ta_line(TimedAutomaton& ta, const Line& l, bool& saw_initial) {
  const std::string& kw = l.tokens[0].text;
  if (kw == "clock") {
    const auto& n = word(l, 1, "clock name");
    if (!is_identifier(n)) parse_error(l.number, "bad clock name '" + n + "'");
    if (ta.find_clock(n)) parse_error(l.number, "duplicate clock '" + n + "'");
    ta.clocks.push_back(n);
  } else if (kw == "param") {
    const auto& n = word(l, 1, "parameter name");
    if (!is_identifier(n)) parse_error(l.number, "bad parameter name '" + n + "'");
    if (ta.parameter && *ta.parameter != n) fail(ErrorKind::Unsupported, "line " + std::to_string(l.number) + ": only one parameter is supported");
    ta.parameter = n;
  } else if (kw == "location") {
    const auto& n = word(l, 1, "location name");
    if (!is_identifier(n)) parse_error(l.number, "bad location name '" + n + "'");
    if (ta.find_location(n)) parse_error(l.number, "duplicate location '" + n + "'");
    bool initial = false, accepting = false;
    for (std::size_t i = 2; i < l.tokens.size(); ++i) {
      const auto& flag = word(l, i, "location flag");
      if (flag == "initial") initial = true;
      else if (flag == "accepting") accepting = true;
      else parse_error(l.number, "unknown location flag '" + flag + "'");
    }
    ta.locations.push_back(Location{n, accepting});
    if (initial) {
      if (saw_initial) parse_error(l.number, "second initial location");
      saw_initial = true;
      ta.initial = ta.locations.size() - 1;
    }
  } else if (kw == "edge") {
    auto src = ta.find_location(word(l, 1, "source location"));
    auto dst = ta.find_location(word(l, 2, "target location"));
    if (!src || !dst) parse_error(l.number, "edge references an undeclared location");
    if (word(l, 3, "'guard'") != "guard") parse_error(l.number, "expected 'guard'");
    Transition t;
    t.src = *src;
    t.dst = *dst;
    try {
      t.guard = parse_guard(quoted(l, 4, "guard"), ta);
    } catch (const Error& e) {
      parse_error(l.number, e.what());
    }
    if (word(l, 5, "'resets'") != "resets") parse_error(l.number, "expected 'resets'");
    t.resets = resolve_resets(ta, set(l, 6, "resets"), l.number);
    std::size_t next = 7;
    if (next < l.tokens.size()) {
      if (word(l, next, "'label'") != "label") parse_error(l.number, "unexpected trailing token");
      t.letter = word(l, next + 1, "label");
      next += 2;
    }
    if (next != l.tokens.size()) parse_error(l.number, "unexpected trailing token");
    ta.transitions.push_back(std::move(t));
  } else {
    return false;
  }
  return true;
}

std::string write_resets(const TimedAutomaton& ta, const std::vector<std::size_t>& resets) {
  std::string s = "{";
  for (std::size_t i = 0; i < resets.size(); ++i) {
    if (i) s += ",";
    s += ta.clocks.at(resets[i]);
  }
  return s + "}";
}

void write_ta_lines(const TimedAutomaton& ta, std::string& out, bool mark_initial, const std::string& prefix) {
  for (const auto& c : ta.clocks) out += prefix + "clock " + c + "\n";
  if (ta.parameter) out += prefix + "param " + *ta.parameter + "\n";
  for (std::size_t i = 0; i < ta.locations.size(); ++i) {
    out += prefix + "location " + ta.locations[i].name;
    if (mark_initial && i == ta.initial) out += " initial";
    if (ta.locations[i].accepting) out += " accepting";
    out += "\n";
  }
  for (const auto& t : ta.transitions) {
    // one line per disjunct; the format has no disjunction
    std::vector<std::string> guards;
    if (t.guard.clauses.empty()) guards.push_back("false");
    for (const auto& c : t.guard.clauses) guards.push_back(write_guard_clause(c, ta));
    for (const auto& g : guards) {
      out += prefix + "edge " + ta.locations[t.src].name + " " + ta.locations[t.dst].name + " guard \"" + g +
             "\" resets " + write_resets(ta, t.resets);
      if (t.letter != "a") out += " label " + t.letter;
      out += "\n";
    }
  }
}

}  // namespace detail

TimedAutomaton parse_ta(const std::string& text) {
  TimedAutomaton ta;
  bool saw_initial = false;
  for (const auto& l : detail::tokenize(text))
    if (!detail::apply_ta_line(ta, l, saw_initial))
      detail::parse_error(l.number, "unknown keyword '" + l.tokens[0].text + "'");
  if (ta.locations.empty()) fail(ErrorKind::Parse, "no locations declared");
  if (!saw_initial) fail(ErrorKind::Parse, "no initial location declared");
  ta.check_well_formed();
  return ta;
}

TimedAutomaton load_ta(const std::string& path) { return parse_ta(detail::read_file(path)); }

std::string write_ta(const TimedAutomaton& ta) {
  std::string out;
  detail::write_ta_lines(ta, out, true, "");
  return out;
}

}  // namespace tta

#include "tta/intervals.hpp"

#include <algorithm>

#include "tta/error.hpp"

namespace tta {

namespace {

// Orders lower ends: a closed end comes before an open one at the same value.
bool lower_before(const Interval& a, const Interval& b) {
  if (a.lo != b.lo) return a.lo < b.lo;
  return a.lo_closed && !b.lo_closed;
}

// True when the upper end of a reaches at least the upper end of b.
bool upper_covers(const Interval& a, const Interval& b) {
  if (a.hi_infinite) return true;
  if (b.hi_infinite) return false;
  if (a.hi != b.hi) return a.hi > b.hi;
  return a.hi_closed || !b.hi_closed;
}

// a ends at or after where b starts, leaving no gap.
bool touches(const Interval& a, const Interval& b) {
  if (a.hi_infinite) return true;
  if (a.hi != b.lo) return a.hi > b.lo;
  return a.hi_closed || b.lo_closed;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool is_infinity(const std::string& s) { return s == "inf" || s == "+inf" || s == "∞" || s == "+∞"; }

Interval parse_interval(const std::string& raw) {
  std::string s = trim(raw);
  if (s.size() >= 2 && s.front() == '{' && s.back() == '}') return Interval::point(Rational::parse(trim(s.substr(1, s.size() - 2))));
  if (s.size() < 5 || (s.front() != '(' && s.front() != '[') || (s.back() != ')' && s.back() != ']'))
    fail(ErrorKind::Parse, "bad interval '" + s + "'");
  std::size_t comma = s.find(',');
  if (comma == std::string::npos) fail(ErrorKind::Parse, "bad interval '" + s + "'");
  Interval i;
  i.lo_closed = s.front() == '[';
  i.hi_closed = s.back() == ']';
  i.lo = Rational::parse(trim(s.substr(1, comma - 1)));
  std::string hi = trim(s.substr(comma + 1, s.size() - comma - 2));
  if (is_infinity(hi)) {
    i.hi_infinite = true;
    if (i.hi_closed) fail(ErrorKind::Parse, "infinity cannot be a closed end in '" + s + "'");
  } else {
    i.hi = Rational::parse(hi);
  }
  if (i.lo < 0) fail(ErrorKind::Parse, "negative interval end in '" + s + "'");
  return i;
}

}  // namespace

bool Interval::is_empty() const {
  if (hi_infinite) return false;
  if (lo != hi) return lo > hi;
  return !(lo_closed && hi_closed);
}

bool Interval::contains(const Rational& r) const {
  if (r < lo || (r == lo && !lo_closed)) return false;
  if (hi_infinite) return true;
  return r < hi || (r == hi && hi_closed);
}

std::string Interval::str() const {
  if (!hi_infinite && lo == hi) return "{" + lo.str() + "}";
  return std::string(lo_closed ? "[" : "(") + lo.str() + ", " + (hi_infinite ? "+inf" : hi.str()) +
         (hi_closed && !hi_infinite ? "]" : ")");
}

IntervalSet IntervalSet::of(const Interval& i) {
  IntervalSet s;
  if (!i.is_empty()) s.parts_.push_back(i);
  return s;
}

void IntervalSet::normalize() {
  std::sort(parts_.begin(), parts_.end(), lower_before);
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    if (p.is_empty()) continue;
    if (!out.empty() && touches(out.back(), p)) {
      if (!upper_covers(out.back(), p)) {
        out.back().hi_infinite = p.hi_infinite;
        out.back().hi = p.hi;
        out.back().hi_closed = p.hi_closed;
      }
    } else {
      out.push_back(p);
    }
  }
  parts_ = std::move(out);
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  IntervalSet s;
  s.parts_ = parts_;
  s.parts_.insert(s.parts_.end(), other.parts_.begin(), other.parts_.end());
  s.normalize();
  return s;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  IntervalSet s;
  for (const auto& a : parts_)
    for (const auto& b : other.parts_) {
      Interval i;
      const Interval& lo = lower_before(a, b) ? b : a;  // the later start
      i.lo = lo.lo;
      i.lo_closed = lo.lo_closed;
      const Interval& hi = upper_covers(a, b) ? b : a;  // the earlier end
      i.hi_infinite = hi.hi_infinite;
      i.hi = hi.hi;
      i.hi_closed = hi.hi_closed;
      if (!i.is_empty()) s.parts_.push_back(i);
    }
  s.normalize();
  return s;
}

bool IntervalSet::contains(const Rational& r) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& i) { return i.contains(r); });
}

std::string IntervalSet::str() const {
  if (parts_.empty()) return "empty";
  std::string out;
  for (const auto& p : parts_) {
    if (!out.empty()) out += " ∪ ";
    out += p.str();
  }
  return out;
}

IntervalSet IntervalSet::parse(const std::string& text) {
  std::string t = trim(text);
  IntervalSet s;
  if (t.empty() || t == "empty" || t == "∅") return s;
  std::string norm;
  for (std::size_t i = 0; i < t.size();) {
    if (t.compare(i, 3, "∪") == 0) {
      norm += ';';
      i += 3;
    } else if (t[i] == 'U') {
      norm += ';';
      ++i;
    } else {
      norm += t[i++];
    }
  }
  std::size_t start = 0;
  while (start <= norm.size()) {
    std::size_t end = norm.find(';', start);
    std::string piece = norm.substr(start, end == std::string::npos ? std::string::npos : end - start);
    Interval i = parse_interval(piece);
    if (i.is_empty()) fail(ErrorKind::Parse, "empty interval '" + trim(piece) + "'");
    s.parts_.push_back(i);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  s.normalize();
  return s;
}

BitWord BitWord::parse(const std::string& text) {
  BitWord w(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') fail(ErrorKind::Parse, "bit word must contain only 0 and 1");
    w.bits_[i] = text[i] == '1';
  }
  return w;
}

bool BitWord::none() const { return std::none_of(bits_.begin(), bits_.end(), [](bool b) { return b; }); }
bool BitWord::all() const { return std::all_of(bits_.begin(), bits_.end(), [](bool b) { return b; }); }

BitWord BitWord::operator|(const BitWord& o) const {
  if (o.size() != size()) fail(ErrorKind::Invalid, "bit word length mismatch");
  BitWord w(size());
  for (std::size_t i = 0; i < size(); ++i) w.bits_[i] = bits_[i] || o.bits_[i];
  return w;
}

BitWord BitWord::operator&(const BitWord& o) const {
  if (o.size() != size()) fail(ErrorKind::Invalid, "bit word length mismatch");
  BitWord w(size());
  for (std::size_t i = 0; i < size(); ++i) w.bits_[i] = bits_[i] && o.bits_[i];
  return w;
}

std::string BitWord::str() const {
  std::string s;
  for (bool b : bits_) s += b ? '1' : '0';
  return s;
}

std::size_t interval_count(std::int64_t c) {
  if (c < 0) fail(ErrorKind::Invalid, "negative largest constant");
  return static_cast<std::size_t>(8 * c + 2);
}

Interval canonical_interval(std::int64_t c, std::size_t index) {
  const std::size_t k = interval_count(c);
  if (index >= k) fail(ErrorKind::Invalid, "interval index out of range");
  if (index == k - 1) return Interval::above(Rational(2 * c), false);
  const auto m = static_cast<std::int64_t>(index / 2);
  if (index % 2 == 0) return Interval::point(Rational(m, 2));
  return Interval::open(Rational(m, 2), Rational(m + 1, 2));
}

IntervalSet bits_to_intervals(const BitWord& w, std::int64_t c) {
  if (w.size() != interval_count(c))
    fail(ErrorKind::Invalid, "bit word of length " + std::to_string(w.size()) + " does not match C = " + std::to_string(c));
  IntervalSet s;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w.get(i)) s = s.unite(IntervalSet::of(canonical_interval(c, i)));
  return s;
}

BitWord intervals_to_bits(const IntervalSet& s, std::int64_t c) {
  BitWord w(interval_count(c));
  IntervalSet covered;
  for (std::size_t i = 0; i < w.size(); ++i) {
    IntervalSet piece = IntervalSet::of(canonical_interval(c, i));
    IntervalSet common = piece.intersect(s);
    if (common.is_empty()) continue;
    if (!(common == piece)) fail(ErrorKind::Invalid, "'" + s.str() + "' is not a union of canonical intervals for C = " + std::to_string(c));
    w.set(i);
    covered = covered.unite(piece);
  }
  if (!(covered == s)) fail(ErrorKind::Invalid, "'" + s.str() + "' reaches outside the non-negative reals");
  return w;
}

}  // namespace tta

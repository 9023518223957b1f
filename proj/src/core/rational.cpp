#include "tta/rational.hpp"

#include <charconv>
#include <limits>

namespace tta {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(const std::string& s, const std::string& whole) {
  std::int64_t v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || b == e) fail(ErrorKind::Parse, "bad number '" + whole + "'");
  return v;
}

}  // namespace

Rational Rational::make(__int128 n, __int128 d) {
  if (d == 0) fail(ErrorKind::Invalid, "zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (!fits(n) || !fits(d)) fail(ErrorKind::Limit, "rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

void Rational::assign(std::int64_t n, std::int64_t d) { *this = make(n, d); }

Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text, text));
  return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  __int128 g = gcd128(a, b);
  __int128 l = static_cast<__int128>(a) / g * b;
  if (l < 0) l = -l;
  if (!fits(l)) fail(ErrorKind::Limit, "lcm overflow");
  return static_cast<std::int64_t>(l);
}

}  // namespace tta

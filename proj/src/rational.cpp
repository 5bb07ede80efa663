#include "nilkit/rational.hpp"

#include <cctype>

#include "nilkit/error.hpp"

namespace nilkit {

Integer floor(const Rational& r) {
  const Integer num = numerator(r);
  const Integer den = denominator(r);  // canonical form keeps den > 0
  Integer q = num / den;
  if (num % den != 0 && num < 0) {
    q -= 1;
  }
  return q;
}

Rational frac(const Rational& r) { return r - Rational(floor(r)); }

bool is_integer(const Rational& r) { return denominator(r) == 1; }

Integer binomial(const Integer& n, int k) {
  if (k < 0) {
    return Integer(0);
  }
  Integer num = 1;
  Integer den = 1;
  for (int i = 0; i < k; ++i) {
    num *= (n - i);
    den *= (i + 1);
  }
  return num / den;
}

Integer binomial(std::int64_t n, int k) { return binomial(Integer(n), k); }

std::string to_string(const Rational& r) {
  if (is_integer(r)) {
    return numerator(r).str();
  }
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s.push_back(c);
    }
  }
  if (s.empty()) {
    throw ParseError("empty rational");
  }
  auto valid_int = [](std::string_view t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    }
    return true;
  };
  auto to_integer = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return Integer(t);
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const std::string p = s.substr(0, slash);
    const std::string q = s.substr(slash + 1);
    if (!valid_int(p) || !valid_int(q)) {
      throw ParseError("malformed rational '" + s + "'");
    }
    const Integer den = to_integer(q);
    if (den == 0) {
      throw ParseError("zero denominator in '" + s + "'");
    }
    return Rational(to_integer(p), den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    const std::string digits = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (!valid_int(whole) || (!digits.empty() && !valid_int(digits)) ||
        (!digits.empty() && (digits[0] == '-' || digits[0] == '+'))) {
      throw ParseError("malformed decimal '" + s + "'");
    }
    Integer scale = 1;
    for (std::size_t i = 0; i < digits.size(); ++i) scale *= 10;
    Rational frac_part = digits.empty() ? Rational(0) : Rational(Integer(digits), scale);
    Rational value = Rational(to_integer(whole));
    return negative ? value - frac_part : value + frac_part;
  }
  if (!valid_int(s)) {
    throw ParseError("malformed rational '" + s + "'");
  }
  return Rational(to_integer(s));
}

Rational centered_mod1(const Rational& r) {
  Rational f = frac(r);
  if (f > Rational(1, 2)) {
    f -= 1;
  }
  return f;
}

Rational circle_distance(const Rational& r) {
  Rational c = centered_mod1(r);
  return c < 0 ? Rational(-c) : c;
}

}  // namespace nilkit

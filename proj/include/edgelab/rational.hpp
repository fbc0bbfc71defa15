#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace edgelab {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long p, long q = 1) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Parses "p/q", an integer, or a decimal such as "-0.125" or "2.5e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s = s.substr(b);
  if (s.empty()) throw SpecError("empty rational literal");
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw SpecError("bad rational literal '" + s + "'");
    if (r.get_den() == 0) throw SpecError("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw SpecError("bad rational literal '" + s + "'");
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw SpecError("bad rational literal '" + s + "'");
    try {
      std::size_t used = 0;
      exponent = std::stol(s.substr(i + 1), &used);
      if (i + 1 + used != s.size()) throw SpecError("bad exponent in '" + s + "'");
    } catch (const std::logic_error&) {
      throw SpecError("bad exponent in '" + s + "'");
    }
  }
  Integer num(digits, 10);
  long shift = exponent - scale;
  Integer ten = 10, p;
  mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r = shift >= 0 ? Rational(num * p) : Rational(num, p);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

inline std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational pow(const Rational& base, unsigned e) {
  Rational out = 1, b = base;
  while (e) {
    if (e & 1u) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Integer catalan(unsigned long n) { return binomial(2 * n, n) / (n + 1); }

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

}  // namespace edgelab

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "univoque/errors.hpp"

namespace univoque {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer floor_of(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

inline Integer ceil_of(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

inline int sign_of(const Rational& x) { return sgn(x); }

// 2^-bits as an exact rational.
inline Rational pow2_neg(unsigned bits) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
  return Rational(Integer(1), den);
}

inline Rational pow_int(const Rational& x, unsigned e) {
  Rational r(1);
  Rational b = x;
  while (e) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return r;
}

// Largest double <= x.
inline double to_double_down(const Rational& x) {
  double d = x.get_d();  // truncates toward zero
  if (!std::isfinite(d)) return d;
  if (cmp(Rational(d), x) > 0) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

// Smallest double >= x.
inline double to_double_up(const Rational& x) {
  double d = x.get_d();
  if (!std::isfinite(d)) return d;
  if (cmp(Rational(d), x) < 0) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

inline double next_down(double d) {
  return std::nextafter(d, -std::numeric_limits<double>::infinity());
}
inline double next_up(double d) {
  return std::nextafter(d, std::numeric_limits<double>::infinity());
}

// n/d in lowest terms; mpq_class(n, d) alone does not reduce.
inline Rational ratio(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// Double nearest to x; ties go down.
inline double to_double_nearest(const Rational& x) {
  const double lo = to_double_down(x), hi = to_double_up(x);
  return x - Rational(lo) <= Rational(hi) - x ? lo : hi;
}

// "num/den", or just "num" for integers.
inline std::string to_string(const Rational& x) {
  Rational c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  Integer v(std::string(s), 10);
  return neg ? Integer(-v) : v;
}

}  // namespace detail

// Exact parse of "p/q", "n", or a finite decimal literal such as "11.5" or
// "1e-6". Decimal literals denote the exact decimal value, never a double.
inline Rational parse_rational(std::string_view text, bool allow_decimal = true) {
  if (text.empty()) throw ParseError("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = detail::parse_integer(text.substr(0, slash));
    Integer den = detail::parse_integer(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    if (!allow_decimal) throw ParseError("decimal literal not accepted: '" + std::string(text) + "'");
    mant = text.substr(0, e);
    Integer ev = detail::parse_integer(text.substr(e + 1));
    if (!ev.fits_slong_p() || abs(ev) > 10000) throw ParseError("exponent out of range");
    exp10 = ev.get_si();
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = mant.find('.'); dot != std::string_view::npos) {
    if (!allow_decimal) throw ParseError("decimal literal not accepted: '" + std::string(text) + "'");
    std::string_view ip = mant.substr(0, dot), fp = mant.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !detail::all_digits(ip)) ||
        (!fp.empty() && !detail::all_digits(fp)))
      throw ParseError("malformed number: '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    if (!detail::all_digits(mant)) throw ParseError("malformed number: '" + std::string(text) + "'");
    digits = std::string(mant);
  }
  Rational r{Integer(digits, 10)};
  Integer p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0)
    r /= Rational(p10);
  else
    r *= Rational(p10);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

// Simplest rational (smallest denominator) in the closed interval [a, b], 0 < a <= b.
inline Rational simplest_between(Rational a, Rational b) {
  // Continued-fraction descent; terms accumulate as a list of integer parts.
  std::vector<Integer> terms;
  for (int guard = 0; guard < 100000; ++guard) {
    Integer fa = floor_of(a);
    if (Rational(fa) == a) {
      terms.push_back(fa);
      break;
    }
    Integer fb = floor_of(b);
    if (fa < fb) {
      terms.push_back(fa + 1);
      break;
    }
    terms.push_back(fa);
    Rational na = 1 / (b - fa), nb = 1 / (a - fa);
    a = na;
    b = nb;
  }
  Rational r(terms.back());
  for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it) r = Rational(*it) + 1 / r;
  r.canonicalize();
  return r;
}

// Closed interval with exact rational endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  explicit Interval(const Rational& point) : lo(point), hi(point) {}
  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}

  bool is_point() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  Rational midpoint() const { return (lo + hi) / 2; }

  friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
  friend Interval operator+(const Interval& a, const Rational& c) { return {a.lo + c, a.hi + c}; }
  friend Interval operator-(const Interval& a, const Rational& c) { return {a.lo - c, a.hi - c}; }
  friend Interval operator*(const Interval& a, const Interval& b) {
    if (sgn(a.lo) >= 0 && sgn(b.lo) >= 0) return {a.lo * b.lo, a.hi * b.hi};
    Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
  }
  friend Interval operator*(const Interval& a, const Rational& c) {
    if (sgn(c) >= 0) return {a.lo * c, a.hi * c};
    return {a.hi * c, a.lo * c};
  }
};

// Round-tripping decimal form of a double.
inline std::string to_decimal_string(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

}  // namespace univoque

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gaugecert {

using Rational = mpq_class;
using Integer = mpz_class;

/// Thrown when an operation's precondition is violated by its arguments.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a certificate produced by the library fails its own re-check.
/// Indicates a bug, never a user error.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Closed interval [lo, hi] of rationals.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h);
  static Interval point(const Rational& v) { return {v, v}; }

  [[nodiscard]] Rational width() const { return hi - lo; }
  [[nodiscard]] bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  [[nodiscard]] bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
};

Rational pow(const Rational& base, unsigned long exponent);
Integer pow(const Integer& base, unsigned long exponent);

/// Largest integer <= x.
Integer floor(const Rational& x);
/// Smallest integer >= x.
Integer ceil(const Rational& x);

/// Enclosure of x^(1/q) for x >= 0 with dyadic endpoints of `bits` fractional
/// bits. The lower end is exact when x is a perfect q-th power at that scale.
Interval root_enclosure(const Rational& x, unsigned long q, unsigned long bits = 64);

/// Enclosure of x^(num/den) for x > 0; negative exponents are allowed.
Interval rational_power_enclosure(const Rational& x, long num, unsigned long den,
                                  unsigned long bits = 64);

/// Parses "a", "a/b", "-a/b" or a finite decimal such as "0.25".
Rational parse_rational(std::string_view text);

/// Canonical "num/den" (or "num" when den == 1).
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Exact conversion of a double to a rational (every finite double is dyadic).
Rational from_double(double v);

/// Largest dyadic k / 2^bits <= x.
Rational dyadic_floor(const Rational& x, unsigned long bits);
/// Smallest dyadic k / 2^bits >= x.
Rational dyadic_ceil(const Rational& x, unsigned long bits);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// num/den in lowest terms. mpq_class(num, den) alone does not reduce, and GMP
/// requires canonical operands.
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace gaugecert

#include "gaugecert/rational.hpp"

#include <cmath>

namespace gaugecert {

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo > hi) throw PreconditionError("Interval: lo > hi");
}

Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational out(pow(Integer(base.get_num()), exponent), pow(Integer(base.get_den()), exponent));
  out.canonicalize();
  return out;
}

Integer floor(const Rational& x) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

Integer ceil(const Rational& x) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

Interval root_enclosure(const Rational& x, unsigned long q, unsigned long bits) {
  if (x < 0) throw PreconditionError("root_enclosure: negative radicand");
  if (q == 0) throw PreconditionError("root_enclosure: zero root order");
  if (q == 1) return Interval::point(x);
  if (x == 0) return Interval::point(Rational(0));

  Integer scale = Integer(1) << (bits * q);
  Integer scaled_num = Integer(x.get_num()) * scale;
  Integer n;
  mpz_fdiv_q(n.get_mpz_t(), scaled_num.get_mpz_t(), x.get_den_mpz_t());
  Integer r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), q);

  Integer denom = Integer(1) << bits;
  Rational lo(r, denom);
  lo.canonicalize();
  bool exact = pow(r, q) * Integer(x.get_den()) == scaled_num;
  if (exact) return Interval::point(lo);
  Rational hi(r + 1, denom);
  hi.canonicalize();
  return {lo, hi};
}

Interval rational_power_enclosure(const Rational& x, long num, unsigned long den,
                                  unsigned long bits) {
  if (x <= 0) throw PreconditionError("rational_power_enclosure: base must be positive");
  if (den == 0) throw PreconditionError("rational_power_enclosure: zero denominator");
  if (num >= 0) return root_enclosure(pow(x, static_cast<unsigned long>(num)), den, bits);
  Rational inv = 1 / x;
  return root_enclosure(pow(inv, static_cast<unsigned long>(-num)), den, bits);
}

namespace {

Integer parse_integer(std::string_view s) {
  if (s.empty()) throw PreconditionError("parse_rational: empty integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw PreconditionError("parse_rational: sign without digits");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') {
      throw PreconditionError("parse_rational: invalid character in '" + std::string(s) + "'");
    }
  }
  Integer out(std::string(s.substr(i)), 10);
  return s[0] == '-' ? Integer(-out) : out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) throw PreconditionError("parse_rational: empty input");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw PreconditionError("parse_rational: zero denominator");
    Rational out(num, den);
    out.canonicalize();
    return out;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    std::string digits(whole);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    digits += frac;
    Integer num = parse_integer(digits);
    Rational out(num, pow(Integer(10), frac.size()));
    out.canonicalize();
    if (negative && out > 0) out = -out;
    return out;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

// Round to nearest, ties to even. mpq get_d truncates.
double to_double(const Rational& q) {
  if (q == 0) return 0.0;
  const Integer a = abs(q.get_num());
  const Integer& b = q.get_den();
  const long e = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 2));
  const long k = 55 - e;  // quotient gets 55 or 56 bits
  Integer n, r;
  if (k >= 0) {
    const Integer num = a << static_cast<mp_bitcnt_t>(k);
    mpz_tdiv_qr(n.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), b.get_mpz_t());
  } else {
    const Integer den = b << static_cast<mp_bitcnt_t>(-k);
    mpz_tdiv_qr(n.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), den.get_mpz_t());
  }
  const long drop = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 53;
  const Integer unit = Integer(1) << static_cast<mp_bitcnt_t>(drop);
  const Integer low = n & (unit - 1);
  n >>= static_cast<mp_bitcnt_t>(drop);
  const Integer half = unit >> 1;
  if (low > half || (low == half && (r != 0 || mpz_odd_p(n.get_mpz_t())))) n += 1;
  const double out = std::ldexp(n.get_d(), static_cast<int>(drop - k));
  return q < 0 ? -out : out;
}

Rational from_double(double v) { return Rational(v); }

Rational dyadic_floor(const Rational& x, unsigned long bits) {
  Integer scale = Integer(1) << bits;
  Rational out(floor(x * Rational(scale)), scale);
  out.canonicalize();
  return out;
}

Rational dyadic_ceil(const Rational& x, unsigned long bits) {
  Integer scale = Integer(1) << bits;
  Rational out(ceil(x * Rational(scale)), scale);
  out.canonicalize();
  return out;
}

}  // namespace gaugecert

#include "gaugecert/norms.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

namespace gaugecert {

LorentzParam::LorentzParam(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (num <= 0 || den <= 0) throw PreconditionError("LorentzParam: num and den must be positive");
  if (std::gcd(num, den) != 1) throw PreconditionError("LorentzParam: num/den not in lowest terms");
  if (!(den < num && num < 2 * den)) throw PreconditionError("LorentzParam: need 1 < p < 2");
}

LorentzParam LorentzParam::parse(std::string_view text) {
  Rational q = parse_rational(text);
  if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) {
    throw PreconditionError("LorentzParam: components too large");
  }
  return {q.get_num().get_si(), q.get_den().get_si()};
}

std::string LorentzParam::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Rational sup_norm(const TriVector& x) {
  Rational best = 0;
  for (const auto& [p, v] : x.entries()) {
    Rational a = abs(v);
    if (a > best) best = a;
  }
  return best;
}

Rational row_sum(const TriVector& x, std::int64_t i, RowSumMode mode) {
  if (i < 1) throw PreconditionError("row_sum: row index must be >= 1");
  Rational sum = 0;
  const auto& m = x.entries();
  for (auto it = m.lower_bound(TriPoint{i, 1}); it != m.end() && it->first.i == i; ++it) {
    sum += mode == RowSumMode::Absolute ? abs(it->second) : it->second;
  }
  return sum;
}

bool is_row_disjoint(const TriVector& x, const TriVector& y) {
  // Stored entries are non-zero, so a row's absolute sum vanishes iff the row is empty.
  auto rx = x.rows();
  for (std::int64_t r : y.rows()) {
    if (rx.contains(r)) return false;
  }
  return true;
}

std::vector<Rational> decreasing_rearrangement(std::span<const Rational> a) {
  std::vector<Rational> out;
  out.reserve(a.size());
  for (const auto& v : a) out.push_back(abs(v));
  std::stable_sort(out.begin(), out.end(), [](const Rational& l, const Rational& r) { return l > r; });
  return out;
}

Rational l2_norm_sq(std::span<const Rational> a) {
  Rational s = 0;
  for (const auto& v : a) s += v * v;
  return s;
}

bool lorentz_le_powered(std::span<const Rational> a_pow, const Rational& c_pow, unsigned r,
                        const LorentzParam& p) {
  if (c_pow < 0) throw PreconditionError("lorentz_le: negative threshold");
  std::vector<Rational> sorted = decreasing_rearrangement(a_pow);
  const auto num = static_cast<unsigned long>(p.num());
  const auto weight_exp = static_cast<unsigned long>(r) * static_cast<unsigned long>(p.den());
  const Rational rhs = pow(c_pow, num);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    // Within a run of ties only the last index can be binding.
    if (k + 1 < sorted.size() && sorted[k + 1] == sorted[k]) continue;
    if (sorted[k] == 0) break;
    Rational lhs = pow(sorted[k], num) * Rational(pow(Integer(static_cast<unsigned long>(k + 1)), weight_exp));
    if (lhs > rhs) return false;
  }
  return true;
}

bool lorentz_le(std::span<const Rational> a, const Rational& c_sq, const LorentzParam& p) {
  if (c_sq < 0) throw PreconditionError("lorentz_le: c_sq must be >= 0");
  std::vector<Rational> sq;
  sq.reserve(a.size());
  for (const auto& v : a) sq.push_back(v * v);
  return lorentz_le_powered(sq, c_sq, 2, p);
}

Interval index_weight(std::int64_t n, const LorentzParam& p, unsigned long bits) {
  if (n < 1) throw PreconditionError("index_weight: n must be >= 1");
  return root_enclosure(Rational(pow(Integer(static_cast<unsigned long>(n)),
                                     static_cast<unsigned long>(p.den()))),
                        static_cast<unsigned long>(p.num()), bits);
}

namespace {

Interval lorentz_value_sq_at(const std::vector<Rational>& sorted, const LorentzParam& p,
                             unsigned long bits) {
  Rational lo = 0;
  Rational hi = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k + 1 < sorted.size() && sorted[k + 1] == sorted[k]) continue;
    if (sorted[k] == 0) break;
    auto n = static_cast<unsigned long>(k + 1);
    // (a*_n)^2 n^{2/p} = A_n * (n^{2 den})^{1/num}
    Interval w = root_enclosure(Rational(pow(Integer(n), 2UL * static_cast<unsigned long>(p.den()))),
                                static_cast<unsigned long>(p.num()), bits);
    Rational vlo = sorted[k] * w.lo;
    Rational vhi = sorted[k] * w.hi;
    if (vlo > lo) lo = vlo;
    if (vhi > hi) hi = vhi;
  }
  return {root_enclosure(lo, 2, bits).lo, root_enclosure(hi, 2, bits).hi};
}

}  // namespace

Interval lorentz_value_sq(std::span<const Rational> a_sq, const LorentzParam& p) {
  std::vector<Rational> sorted = decreasing_rearrangement(a_sq);
  const Rational tol(1, 1000000000);
  for (unsigned long bits = 64;; bits *= 2) {
    Interval out = lorentz_value_sq_at(sorted, p, bits);
    Rational scale = out.hi > 1 ? out.hi : Rational(1);
    if (out.width() <= tol * scale || bits >= 4096) return out;
  }
}

Interval lorentz_value(std::span<const Rational> a, const LorentzParam& p) {
  std::vector<Rational> sq;
  sq.reserve(a.size());
  for (const auto& v : a) sq.push_back(v * v);
  return lorentz_value_sq(sq, p);
}

Rational rho_sq(const TriVector& x) {
  Rational total = 0;
  Rational row = 0;
  std::int64_t current = 0;
  auto flush = [&] {
    if (current != 0) {
      Rational avg = row / current;
      total += avg * avg;
    }
  };
  for (const auto& [pt, v] : x.entries()) {
    if (pt.i != current) {
      flush();
      current = pt.i;
      row = 0;
    }
    row += abs(v);
  }
  flush();
  return total;
}

Rational z_pair(const TriVector& x, std::span<const Rational> b) {
  Rational total = 0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (b[k] == 0) continue;
    auto i = static_cast<std::int64_t>(k + 1);
    total += b[k] * row_sum(x, i, RowSumMode::Signed) / i;
  }
  return total;
}

ConstantC constant_C(const LorentzParam& p, std::int64_t terms) {
  if (terms < 1) throw PreconditionError("constant_C: terms must be >= 1");
  constexpr unsigned long kBits = 64;
  const auto num = static_cast<unsigned long>(p.num());
  const auto two_den = 2UL * static_cast<unsigned long>(p.den());

  // floor(2^K n^{-2den/num}) = floor root_num of floor(2^{K num} / n^{2den}).
  const Integer scaled_one = Integer(1) << (kBits * num);
  Integer floor_sum = 0;
  Integer q;
  Integer r;
  Integer n_pow;
  for (std::int64_t n = 1; n <= terms; ++n) {
    mpz_ui_pow_ui(n_pow.get_mpz_t(), static_cast<unsigned long>(n), two_den);
    mpz_fdiv_q(q.get_mpz_t(), scaled_one.get_mpz_t(), n_pow.get_mpz_t());
    mpz_root(r.get_mpz_t(), q.get_mpz_t(), num);
    floor_sum += r;
  }
  const Integer denom = Integer(1) << kBits;
  Rational partial_lo(floor_sum, denom);
  partial_lo.canonicalize();
  Rational partial_hi(floor_sum + Integer(static_cast<unsigned long>(terms)), denom);
  partial_hi.canonicalize();

  // sum_{n>N} n^{-s} lies between the integrals of t^{-s} over [N+1, inf) and [N, inf);
  // that integral is a^{1-s}/(s-1) with 1-s = -(2den-num)/num.
  const auto excess = static_cast<long>(two_den - num);
  const Rational inv_s_minus_1(static_cast<long>(num), excess);
  Interval tail_hi = rational_power_enclosure(Rational(terms), -excess, num, kBits);
  Interval tail_lo = rational_power_enclosure(Rational(terms + 1), -excess, num, kBits);

  Interval c_sq(partial_lo + tail_lo.lo * inv_s_minus_1, partial_hi + tail_hi.hi * inv_s_minus_1);
  Interval c(root_enclosure(c_sq.lo, 2, kBits).lo, root_enclosure(c_sq.hi, 2, kBits).hi);
  return {c_sq, c};
}

const ConstantC& default_constant_C(const LorentzParam& p) {
  static std::mutex mu;
  static std::map<std::pair<std::int64_t, std::int64_t>, ConstantC> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(p.num(), p.den());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, constant_C(p, kDefaultCTerms)).first;
  return it->second;
}

}  // namespace gaugecert

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gaugecert/rational.hpp"
#include "gaugecert/trivector.hpp"

namespace gaugecert {

/// Exponent p = num/den of the weak-l^p quasi-norm, 1 < p < 2, in lowest terms.
class LorentzParam {
 public:
  LorentzParam() : LorentzParam(3, 2) {}
  LorentzParam(std::int64_t num, std::int64_t den);

  static LorentzParam parse(std::string_view text);

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] Rational value() const { return Rational(num_, den_); }
  [[nodiscard]] std::string str() const;

  friend bool operator==(const LorentzParam&, const LorentzParam&) = default;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

enum class RowSumMode { Signed, Absolute };

Rational sup_norm(const TriVector& x);
Rational row_sum(const TriVector& x, std::int64_t i, RowSumMode mode);
bool is_row_disjoint(const TriVector& x, const TriVector& y);

std::vector<Rational> decreasing_rearrangement(std::span<const Rational> a);
Rational l2_norm_sq(std::span<const Rational> a);

/// Exact test of sup_n a*_n n^{1/p} <= c given only c_sq = c^2.
bool lorentz_le(std::span<const Rational> a, const Rational& c_sq, const LorentzParam& p);

/// Same test where the caller supplies a_n^r and c^r for some r >= 1, e.g.
/// squared rho-values with a squared threshold (r = 2), or fourth powers when
/// only c^4 is rational. Entries of `a_pow` must be >= 0.
bool lorentz_le_powered(std::span<const Rational> a_pow, const Rational& c_pow, unsigned r,
                        const LorentzParam& p);

/// Certified enclosure of the weak-l^p quasi-norm, width <= 1e-9 * max(1, hi).
Interval lorentz_value(std::span<const Rational> a, const LorentzParam& p);

/// Enclosure of the quasi-norm of a sequence given by its squares.
Interval lorentz_value_sq(std::span<const Rational> a_sq, const LorentzParam& p);

/// Enclosure of n^{1/p}.
Interval index_weight(std::int64_t n, const LorentzParam& p, unsigned long bits = 64);

/// rho(x)^2 = sum_i (row_sum(x,i,absolute)/i)^2.
Rational rho_sq(const TriVector& x);

/// Pairing <x, sum_i b_i z_i> = sum_i b_i * row_sum(x,i,signed)/i, with b
/// indexed from row 1.
Rational z_pair(const TriVector& x, std::span<const Rational> b);

struct ConstantC {
  Interval c_sq;  ///< enclosure of sum_n n^{-2/p}
  Interval c;     ///< enclosure of its square root
};

/// Enclosure of C^2 = sum_n n^{-2/p} from the first `terms` summands plus
/// integral bounds for the tail on both sides.
ConstantC constant_C(const LorentzParam& p, std::int64_t terms);

/// constant_C at the library default depth, memoised per p.
const ConstantC& default_constant_C(const LorentzParam& p);

inline constexpr std::int64_t kDefaultCTerms = 100000;

}  // namespace gaugecert

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaugecert/rational.hpp"
#include "gaugecert/trivector.hpp"

namespace gaugecert {

/// Row counts m_i encoding b = (m_i / i) in B. Index 0 holds row 1.
/// Invariant: m_i >= 0 and sum (m_i/i)^2 <= 1.
class BSeq {
 public:
  BSeq() = default;
  /// Throws PreconditionError when some m_i < 0 or the l2 norm exceeds 1.
  explicit BSeq(std::vector<std::int64_t> m);

  [[nodiscard]] const std::vector<std::int64_t>& counts() const { return m_; }
  /// m_i for row i >= 1 (0 beyond the stored length).
  [[nodiscard]] std::int64_t count(std::int64_t i) const;
  /// b_i = m_i / i.
  [[nodiscard]] Rational value(std::int64_t i) const;
  [[nodiscard]] std::vector<Rational> values() const;
  [[nodiscard]] Rational norm_sq() const;
  [[nodiscard]] std::int64_t length() const { return static_cast<std::int64_t>(m_.size()); }
  [[nodiscard]] bool is_zero() const;

  /// Equality ignores trailing zeros.
  friend bool operator==(const BSeq& a, const BSeq& b);

 private:
  std::vector<std::int64_t> m_;
};

BSeq make_b(std::vector<std::int64_t> m);

/// Text form "b: m1 m2 ... mk".
std::string format_bseq(const BSeq& b);
BSeq parse_bseq(const std::string& line);

/// The 0/1 vector with ones at (i, 1..m_i).
TriVector x_b(const BSeq& b);

inline constexpr std::int64_t kEnumerateBound = 6;

/// Every BSeq supported on rows <= max_row (lexicographic order, padded to
/// max_row). Refuses max_row > bound.
std::vector<BSeq> enumerate_B(std::int64_t max_row, std::int64_t bound = kEnumerateBound);

/// Witness that |x| <= scale * sum_q weights_q x_{b_q} with sum weights <= 1.
struct UCertificate {
  std::vector<BSeq> generators;
  std::vector<Rational> weights;
  Rational scale = 1;

  /// Re-checks every clause by direct pointwise comparison.
  [[nodiscard]] bool certifies(const TriVector& x) const;
  /// Pointwise value of sum_q weights_q x_{b_q} at p.
  [[nodiscard]] Rational cover_value(const TriPoint& p) const;
  [[nodiscard]] Rational weight_sum() const;
};

/// Certificate for x in lambda*U, or nullopt. Exact.
/// Precondition: support rows <= max_row <= kEnumerateBound.
std::optional<UCertificate> u_member(const TriVector& x, const Rational& lambda, std::int64_t max_row);

struct UGauge {
  Rational value;      ///< min{lambda : x in lambda U}
  UCertificate cert;   ///< certificate at scale = value (scale 1 for x = 0)
};

inline constexpr std::size_t kDefaultCandidateCap = 20000;

/// Exact gauge of U at x for arbitrary row supports, provided the number of
/// maximal covering generators stays below `candidate_cap`.
UGauge u_gauge(const TriVector& x, std::size_t candidate_cap = kDefaultCandidateCap);

/// Pareto-maximal elements of B restricted to the support of x, with each m_i
/// taken from {0} and the support columns of row i.
std::vector<BSeq> covering_candidates(const TriVector& x, std::size_t candidate_cap);

/// M^{-1} sum x_{b_q}. Throws on an empty list.
TriVector average_generators(std::span<const BSeq> bs);

/// max over rows of |{q : m_i^{(q)} > 0}|.
std::int64_t disjointness_degree(std::span<const BSeq> bs);

/// Given x with |x| <= cover (a U-certificate of scale*weight_sum <= 1) and
/// sup|x| <= epsilon, returns M generators whose average z satisfies |x| <= z
/// pointwise and sup z <= epsilon. M is a multiple of the denominator of
/// epsilon and of every scaled weight.
std::vector<BSeq> small_sup_presentation(const TriVector& x, const UCertificate& cover,
                                         const Rational& epsilon);

}  // namespace gaugecert

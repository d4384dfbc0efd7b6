#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaugecert/arep.hpp"
#include "gaugecert/generators.hpp"
#include "gaugecert/norms.hpp"
#include "gaugecert/rational.hpp"

namespace gaugecert {

/// Matrix position, both indices 1-based.
struct Cell {
  std::int64_t row = 0;
  std::int64_t col = 0;
  auto operator<=>(const Cell&) const = default;
};

/// k x l matrix with entries in [0, 1].
class UnitMatrix {
 public:
  UnitMatrix() = default;
  UnitMatrix(std::int64_t k, std::int64_t l);
  /// Throws PreconditionError if any entry lies outside [0, 1] or rows are ragged.
  static UnitMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  [[nodiscard]] std::int64_t rows() const { return k_; }
  [[nodiscard]] std::int64_t cols() const { return l_; }
  [[nodiscard]] const Rational& at(std::int64_t i, std::int64_t j) const;
  void set(std::int64_t i, std::int64_t j, const Rational& v);

  /// Sigma(a): sum of all entries.
  [[nodiscard]] Rational total() const;
  [[nodiscard]] Rational column_mass(std::int64_t j) const;
  /// s_j(a) = min{i : a_{i,j} != 0}, 0 for a zero column.
  [[nodiscard]] std::int64_t top(std::int64_t j) const;

  friend bool operator==(const UnitMatrix&, const UnitMatrix&) = default;

 private:
  std::int64_t k_ = 0;
  std::int64_t l_ = 0;
  std::vector<Rational> a_;
};

/// Indices S (0-based, increasing) with 1/2 <= sum_{i in S} a_i <= 1.
/// Precondition: entries in [0, 1] and sum > 1.
std::vector<std::size_t> select_subset(std::span<const Rational> a);

struct ReduceStep {
  std::vector<Cell> selected;
  UnitMatrix reduced;
};

/// One reduction: nullopt when the column tops sum to <= 1.
std::optional<ReduceStep> reduce_step(const UnitMatrix& a);

struct PartitionResult {
  std::vector<std::vector<Cell>> parts;  ///< positions in the caller's matrix
  Rational bound;                        ///< M with Sigma(a) <= M
  std::int64_t k = 0;
  std::int64_t reductions = 0;           ///< t, the number of reduce steps
};

/// Partition with at most 2M + k parts, part sums <= 1 and at most one cell
/// per column in each part. Precondition: Sigma(a) <= bound.
PartitionResult partition_matrix(const UnitMatrix& a, const Rational& bound);

/// Re-checks the three partition properties plus exact cover.
bool check_partition(const UnitMatrix& a, const PartitionResult& result);

/// Breakpoints 0 = j_0 < ... < j_t = l; every block but the last has mass
/// > eta_m. Returns {0} for a matrix without columns.
std::vector<std::int64_t> column_blocking(const UnitMatrix& a, const Rational& eta_m);

/// One column block of the decomposition.
struct DecompositionBlock {
  std::int64_t first_col = 0;  ///< j_m + 1
  std::int64_t last_col = 0;   ///< j_{m+1}
  Rational mass;               ///< sum of the block's matrix entries
  std::int64_t reductions = 0;
  std::vector<BSeq> pieces;    ///< d^m_nu, one per partition part
  Rational rho_sq;             ///< rho(y_m)^2 with y_m = M^{-1} sum_nu x_{d^m_nu}
};

struct DecompositionCertificate {
  std::vector<BSeq> generators;  ///< input b_1..b_M
  Rational epsilon;
  LorentzParam p;
  std::int64_t m = 0;            ///< M
  std::int64_t k = 0;            ///< floor(epsilon M)
  Interval eta;                  ///< enclosure of (2 eps^{-p/4} - 1)^{-1}
  Rational eta_used;             ///< rational threshold >= eta actually used
  std::vector<std::int64_t> breakpoints;
  std::vector<DecompositionBlock> blocks;
  Rational scale;                ///< s with x in s*A, s^4 <= 625 eps

  [[nodiscard]] TriVector block_element(std::size_t m_index) const;
};

/// Runs the column-blocking / partition / reassembly pipeline on the average
/// x = M^{-1} sum x_{b_i}. Preconditions: 0 < epsilon < 1 and sup x <= epsilon.
/// Throws InvariantError (with a transcript) if the result fails verification.
DecompositionCertificate main_decompose(std::span<const BSeq> bs, const Rational& epsilon,
                                        const LorentzParam& p);

struct VerifyReport {
  std::vector<std::string> failures;
  [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// Re-verifies every claim of a certificate from its stored data.
VerifyReport verify_decomposition(const DecompositionCertificate& cert);

/// The certificate as a single A-representative of x / scale.
ARepresentative decomposition_rep(const DecompositionCertificate& cert);

/// Block test on a sequence given by squares: each block has
/// quasi-norm <= 1 and sup <= n_k^{-1/p}. Breakpoints must run 0 = n_0 < ... = len.
bool check_block_conditions_sq(std::span<const Rational> a_sq,
                               std::span<const std::int64_t> breakpoints, const LorentzParam& p);
bool check_block_conditions(std::span<const Rational> a, std::span<const std::int64_t> breakpoints,
                            const LorentzParam& p);

struct MergeResult {
  std::vector<std::size_t> selected;        ///< indices into the input
  std::vector<std::int64_t> breakpoints;    ///< cumulative lengths of selected reps
  ARepresentative half_sum;                 ///< 1/2 * concatenation of selected reps
  std::vector<bool> prefix_certified;       ///< per selected prefix
};

/// Greedy subsequence whose half-sum is certified to lie in A.
/// Precondition: reps pairwise row disjoint and individually valid.
MergeResult merge_blocks(std::span<const ARepresentative> reps, const LorentzParam& p);

struct SplitResult {
  std::vector<Rational> weights;
  Rational delta_sq_pow;                    ///< eps^{den}: rho^2 > delta^2 iff (rho^2)^{4 num} > this
  std::int64_t r = 0;                       ///< floor(eps^{-1/8})
  std::vector<std::vector<std::size_t>> permutations;  ///< large pieces first
  std::vector<std::size_t> large_counts;    ///< |A_i|
  std::vector<ARepresentative> tails;       ///< S, one per input rep
  TriVector u;
  TriVector v;
  std::vector<TriVector> v_parts;           ///< v_1 .. v_r
  std::vector<std::optional<DecompositionCertificate>> v_certs;
  std::vector<Rational> v_bounds;           ///< certified tau(v_l) bounds
  Rational tau_v_bound;
};

/// Splits y = sum weights_i * rep_i (non-negative pieces, sup y <= eps) into
/// u in co(S) with S eps^{1/8p}-small and v with tau(v) <= 5 eps^{1/8}.
SplitResult split_v_element(std::span<const Rational> weights, std::span<const ARepresentative> reps,
                            const Rational& epsilon, const LorentzParam& p);

/// Independent re-check of a split against its inputs.
VerifyReport verify_split(const SplitResult& split, std::span<const ARepresentative> reps,
                          const Rational& epsilon, const LorentzParam& p);

/// (2 eps^{-p/4} - 1)^{-1} enclosed with dyadic bits.
Interval eta_enclosure(const Rational& epsilon, const LorentzParam& p, unsigned long bits = 64);

}  // namespace gaugecert

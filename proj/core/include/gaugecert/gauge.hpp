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
#include "gaugecert/trivector.hpp"

namespace gaugecert {

struct GaugeConfig {
  LorentzParam p;
  std::size_t candidate_cap = kDefaultCandidateCap;
  /// Row-partition search runs when the support has at most this many rows.
  std::int64_t partition_rows = 6;
  /// Optional presentation x <= M^{-1} sum x_b for the decomposition strategy.
  std::optional<std::vector<BSeq>> presentation;
  bool use_decomposition = true;
  /// Largest generator count the decomposition strategy may build.
  std::int64_t max_presentation = 4096;
  /// Random unit b sampled by tau_lower.
  int pairing_samples = 16;
  std::uint64_t seed = 0;
};

/// min over the supplied representatives of their largest rho^2; an upper
/// bound for phi(y)^2. Throws PreconditionError if the sums disagree.
Rational phi_upper(std::span<const ARepresentative> reps);

struct UpperBound {
  Rational hi;
  VCertificate cert;  ///< certifies x in hi * co(A) (any scale for x = 0)
  std::string strategy;
};

/// Best certified upper bound over the U-gauge, row-partition and
/// decomposition strategies.
UpperBound tau_upper(const TriVector& x, const GaugeConfig& config = {});

enum class LowerKind { Zero, SupNorm, Rho, Pairing, Dual };

std::string to_string(LowerKind kind);

struct LowerWitness {
  LowerKind kind = LowerKind::Zero;
  TriPoint point{1, 1};          ///< SupNorm: the coordinate
  std::vector<Rational> b;       ///< Pairing: the unit sequence
  TriVector dual;                ///< Dual: f >= 0 on the support
  Rational dual_bound;           ///< Dual: certified sup of <f, a> over A
  Rational value;                ///< the lower bound
};

struct LowerBound {
  Rational lo;
  LowerWitness witness;
};

/// max of sup|x|, rho(x)/C_hi and sampled |z_pair(x,b)|/C_hi.
LowerBound tau_lower(const TriVector& x, const GaugeConfig& config = {});

struct GaugeInterval {
  Rational lo;
  Rational hi;
  LowerWitness lower;
  VCertificate upper;
  std::int64_t iterations = 0;
};

inline constexpr std::int64_t kMicroRows = 3;

/// Encloses tau(x) to width <= tol for x supported on rows <= 3 by column
/// generation over verified A-atoms with exact pricing bounds.
/// Throws PreconditionError for larger supports and InvariantError when the
/// iteration cap is reached before the tolerance.
GaugeInterval tau_micro_oracle(const TriVector& x, const Rational& tol, const GaugeConfig& config = {});

struct QuotientWitness {
  int branch = 0;
  TriVector y;
  Rational pairing;
  BSeq generator;
  VCertificate cert;
};

/// Witness for the 2/9 lower bound on the quotient functional at sum b_i z_i.
/// Precondition: sum b_i^2 = 1 exactly.
QuotientWitness quotient_witness(std::span<const Rational> b);

/// Re-checks a quotient witness: y in V at scale 1 and the stored pairing.
bool check_quotient_witness(const QuotientWitness& w, std::span<const Rational> b, const LorentzParam& p);

/// Restricts every piece to the given coordinates and recomputes rho.
ARepresentative restrict_rep(const ARepresentative& rep, const TriVector& support);

}  // namespace gaugecert

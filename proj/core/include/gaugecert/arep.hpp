#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaugecert/generators.hpp"
#include "gaugecert/norms.hpp"
#include "gaugecert/trivector.hpp"

namespace gaugecert {

/// A row-disjoint sum y_1 + ... + y_m of U-elements whose rho-vector has
/// weak-l^p quasi-norm <= 1. Pieces may be zero (padding).
struct ARepresentative {
  std::vector<TriVector> pieces;
  std::vector<UCertificate> certs;
  std::vector<Rational> rho_sq;  ///< rho(piece)^2, exact

  [[nodiscard]] std::size_t length() const { return pieces.size(); }
  [[nodiscard]] TriVector sum() const;
  [[nodiscard]] Rational max_rho_sq() const;
};

enum class ARepClause { NotRowDisjoint, InvalidUCertificate, LorentzViolated, RhoMismatch };

std::string to_string(ARepClause clause);

class ARepRejected : public PreconditionError {
 public:
  explicit ARepRejected(ARepClause clause)
      : PreconditionError("make_a_rep: " + gaugecert::to_string(clause)), clause_(clause) {}
  [[nodiscard]] ARepClause clause() const { return clause_; }

 private:
  ARepClause clause_;
};

/// Validates and assembles a representative. Throws ARepRejected.
ARepresentative make_a_rep(std::vector<std::pair<TriVector, UCertificate>> pieces,
                           const LorentzParam& p);

/// The first violated clause, or nullopt when the representative is valid.
std::optional<ARepClause> check_a_rep(const ARepresentative& rep, const LorentzParam& p);

/// Witness that x lies in scale * co(A): |x| <= scale * sum_i weights_i |rep_i|.
struct VCertificate {
  std::vector<Rational> weights;
  std::vector<ARepresentative> reps;
  Rational scale = 1;

  [[nodiscard]] bool certifies(const TriVector& x, const LorentzParam& p) const;
  /// sum_i weights_i |rep_i|, the element of co(A) that dominates x / scale.
  [[nodiscard]] TriVector hull_point() const;
};

/// Single-piece representative of a U-element.
ARepresentative singleton_rep(const TriVector& piece, const UCertificate& cert);

}  // namespace gaugecert

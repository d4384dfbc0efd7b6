#include "gaugecert/arep.hpp"

#include <set>

namespace gaugecert {

TriVector ARepresentative::sum() const {
  TriVector s;
  for (const auto& y : pieces) s += y;
  return s;
}

Rational ARepresentative::max_rho_sq() const {
  Rational best = 0;
  for (const auto& r : rho_sq) {
    if (r > best) best = r;
  }
  return best;
}

std::string to_string(ARepClause clause) {
  switch (clause) {
    case ARepClause::NotRowDisjoint:
      return "pieces are not pairwise row disjoint";
    case ARepClause::InvalidUCertificate:
      return "a piece's U-certificate does not validate at scale 1";
    case ARepClause::LorentzViolated:
      return "rho-vector exceeds the weak-l^p bound 1";
    case ARepClause::RhoMismatch:
      return "stored rho^2 differs from the piece";
  }
  return "unknown clause";
}

std::optional<ARepClause> check_a_rep(const ARepresentative& rep, const LorentzParam& p) {
  if (rep.certs.size() != rep.pieces.size() || rep.rho_sq.size() != rep.pieces.size()) {
    return ARepClause::RhoMismatch;
  }
  std::set<std::int64_t> seen;
  for (const auto& y : rep.pieces) {
    for (std::int64_t r : y.rows()) {
      if (!seen.insert(r).second) return ARepClause::NotRowDisjoint;
    }
  }
  for (std::size_t l = 0; l < rep.pieces.size(); ++l) {
    const auto& cert = rep.certs[l];
    if (!cert.certifies(rep.pieces[l]) || cert.scale * cert.weight_sum() > 1) {
      return ARepClause::InvalidUCertificate;
    }
    if (rho_sq(rep.pieces[l]) != rep.rho_sq[l]) return ARepClause::RhoMismatch;
  }
  if (!lorentz_le_powered(rep.rho_sq, Rational(1), 2, p)) return ARepClause::LorentzViolated;
  return std::nullopt;
}

ARepresentative make_a_rep(std::vector<std::pair<TriVector, UCertificate>> pieces,
                           const LorentzParam& p) {
  ARepresentative rep;
  for (auto& [y, cert] : pieces) {
    rep.rho_sq.push_back(rho_sq(y));
    rep.pieces.push_back(std::move(y));
    rep.certs.push_back(std::move(cert));
  }
  if (auto bad = check_a_rep(rep, p)) throw ARepRejected(*bad);
  return rep;
}

ARepresentative singleton_rep(const TriVector& piece, const UCertificate& cert) {
  ARepresentative rep;
  rep.pieces.push_back(piece);
  rep.certs.push_back(cert);
  rep.rho_sq.push_back(rho_sq(piece));
  return rep;
}

TriVector VCertificate::hull_point() const {
  TriVector h;
  for (std::size_t i = 0; i < reps.size(); ++i) h += weights[i] * reps[i].sum().abs();
  return h;
}

bool VCertificate::certifies(const TriVector& x, const LorentzParam& p) const {
  if (scale <= 0 || weights.size() != reps.size()) return false;
  Rational total = 0;
  for (const auto& w : weights) {
    if (w <= 0) return false;
    total += w;
  }
  if (total > 1) return false;
  for (const auto& rep : reps) {
    if (check_a_rep(rep, p)) return false;
  }
  TriVector h = hull_point();
  for (const auto& [pt, v] : x.entries()) {
    if (abs(v) > scale * h.get(pt)) return false;
  }
  return true;
}

}  // namespace gaugecert

#include "gaugecert/gauge.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "gaugecert/decompose.hpp"
#include "gaugecert/lp.hpp"
#include "gaugecert/random.hpp"

namespace gaugecert {

Rational phi_upper(std::span<const ARepresentative> reps) {
  if (reps.empty()) throw PreconditionError("phi_upper: no representatives");
  const TriVector y = reps.front().sum();
  Rational best = reps.front().max_rho_sq();
  for (const auto& rep : reps.subspan(1)) {
    if (rep.sum() != y) throw PreconditionError("phi_upper: representatives disagree");
    best = std::min(best, rep.max_rho_sq());
  }
  return best;
}

ARepresentative restrict_rep(const ARepresentative& rep, const TriVector& support) {
  ARepresentative out;
  for (std::size_t l = 0; l < rep.length(); ++l) {
    TriVector piece;
    for (const auto& [pt, v] : rep.pieces[l].entries()) {
      if (support.get(pt) != 0) piece.set(pt, v);
    }
    out.rho_sq.push_back(rho_sq(piece));
    out.pieces.push_back(std::move(piece));
    out.certs.push_back(rep.certs[l]);
  }
  return out;
}

namespace {

void for_each_set_partition(const std::vector<std::int64_t>& rows,
                            const std::function<void(const std::vector<std::set<std::int64_t>>&)>& visit) {
  std::vector<std::set<std::int64_t>> groups;
  std::function<void(std::size_t)> rec = [&](std::size_t idx) {
    if (idx == rows.size()) {
      visit(groups);
      return;
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      groups[g].insert(rows[idx]);
      rec(idx + 1);
      groups[g].erase(rows[idx]);
    }
    groups.push_back({rows[idx]});
    rec(idx + 1);
    groups.pop_back();
  };
  rec(0);
}

VCertificate single_rep_cert(ARepresentative rep, const Rational& scale) {
  VCertificate c;
  c.weights = {Rational(1)};
  c.reps.push_back(std::move(rep));
  c.scale = scale;
  return c;
}

// Strategy (a): x / lambda* is a single U-piece.
std::optional<UpperBound> upper_from_u(const TriVector& ax, const GaugeConfig& cfg) {
  UGauge g = u_gauge(ax, cfg.candidate_cap);
  UCertificate cert = g.cert;
  cert.scale = 1;
  UpperBound out;
  out.hi = g.value;
  out.cert = single_rep_cert(singleton_rep(ax * (1 / g.value), cert), g.value);
  out.strategy = "u-gauge";
  return out;
}

// Strategy (b): one piece per group of a row partition.
std::optional<UpperBound> upper_from_partition(const TriVector& ax, const GaugeConfig& cfg) {
  std::set<std::int64_t> row_set = ax.rows();
  std::vector<std::int64_t> rows(row_set.begin(), row_set.end());
  std::map<std::set<std::int64_t>, UGauge> memo;
  auto gauge_of = [&](const std::set<std::int64_t>& g) -> const UGauge& {
    auto it = memo.find(g);
    if (it == memo.end()) it = memo.emplace(g, u_gauge(ax.restrict_rows(g), cfg.candidate_cap)).first;
    return it->second;
  };

  std::optional<Rational> best;
  std::vector<std::set<std::int64_t>> best_groups;
  auto consider = [&](const std::vector<std::set<std::int64_t>>& groups) {
    Rational s = 0;
    std::vector<Rational> rho_list;
    for (const auto& g : groups) {
      s = std::max(s, gauge_of(g).value);
      rho_list.push_back(rho_sq(ax.restrict_rows(g)));
    }
    s = std::max(s, lorentz_value_sq(rho_list, cfg.p).hi);
    if (!best || s < *best) {
      best = s;
      best_groups = groups;
    }
  };
  if (static_cast<std::int64_t>(rows.size()) <= cfg.partition_rows) {
    for_each_set_partition(rows, consider);
  } else {
    std::vector<std::set<std::int64_t>> singles;
    for (auto r : rows) singles.push_back({r});
    consider(singles);
  }
  if (!best || *best == 0) return std::nullopt;

  const Rational& s = *best;
  std::vector<std::pair<TriVector, UCertificate>> pieces;
  for (const auto& g : best_groups) {
    const UGauge& ug = gauge_of(g);
    UCertificate cert = ug.cert;
    cert.scale = ug.value / s;
    pieces.emplace_back(ax.restrict_rows(g) * (1 / s), std::move(cert));
  }
  UpperBound out;
  out.hi = s;
  out.cert = single_rep_cert(make_a_rep(std::move(pieces), cfg.p), s);
  out.strategy = "row-partition";
  return out;
}

Integer presentation_size(const Rational& eps, const UCertificate& cover) {
  Integer size = eps.get_den();
  for (const auto& w : cover.weights) {
    Rational om = cover.scale * w;
    size = lcm(size, Integer(om.get_den()));
  }
  return size;
}

// Strategy (c): the decomposition pipeline on a generator presentation.
std::optional<UpperBound> upper_from_decomposition(const TriVector& ax, const GaugeConfig& cfg) {
  std::vector<BSeq> bs;
  Rational factor = 1;
  if (cfg.presentation) {
    bs = *cfg.presentation;
    if (bs.empty() || !ax.dominated_by(average_generators(bs))) return std::nullopt;
  } else {
    UGauge g = u_gauge(ax, cfg.candidate_cap);
    factor = g.value;
    TriVector y = ax * (1 / factor);
    Rational eps = sup_norm(y);
    if (eps >= 1) return std::nullopt;
    UCertificate cover = g.cert;
    cover.scale = 1;
    if (presentation_size(eps, cover) > cfg.max_presentation) return std::nullopt;
    bs = small_sup_presentation(y, cover, eps);
  }
  if (static_cast<std::int64_t>(bs.size()) > cfg.max_presentation) return std::nullopt;
  Rational eps = sup_norm(average_generators(bs));
  if (eps <= 0 || eps >= 1) return std::nullopt;
  DecompositionCertificate dc = main_decompose(bs, eps, cfg.p);
  if (dc.scale == 0) return std::nullopt;
  UpperBound out;
  out.hi = factor * dc.scale;
  out.cert = single_rep_cert(decomposition_rep(dc), out.hi);
  out.strategy = "decomposition";
  return out;
}

}  // namespace

UpperBound tau_upper(const TriVector& x, const GaugeConfig& config) {
  if (x.empty()) return {Rational(0), VCertificate{}, "zero"};
  const TriVector ax = x.abs();
  std::optional<UpperBound> best;
  using Strategy = std::optional<UpperBound> (*)(const TriVector&, const GaugeConfig&);
  std::vector<Strategy> strategies{upper_from_u, upper_from_partition};
  if (config.use_decomposition || config.presentation) strategies.push_back(upper_from_decomposition);
  for (Strategy s : strategies) {
    std::optional<UpperBound> ub;
    try {
      ub = s(ax, config);
    } catch (const PreconditionError&) {
      continue;
    }
    if (ub && (!best || ub->hi < best->hi)) best = std::move(ub);
  }
  if (!best) throw InvariantError("tau_upper: no strategy produced a certificate");
  if (!best->cert.certifies(x, config.p)) {
    throw InvariantError("tau_upper: " + best->strategy + " certificate fails re-check");
  }
  return *best;
}

std::string to_string(LowerKind kind) {
  switch (kind) {
    case LowerKind::Zero:
      return "zero";
    case LowerKind::SupNorm:
      return "sup-norm";
    case LowerKind::Rho:
      return "rho";
    case LowerKind::Pairing:
      return "pairing";
    case LowerKind::Dual:
      return "dual";
  }
  return "unknown";
}

LowerBound tau_lower(const TriVector& x, const GaugeConfig& config) {
  LowerBound out;
  out.lo = 0;
  if (x.empty()) return out;
  auto offer = [&](const Rational& v, LowerWitness w) {
    if (v > out.lo) {
      w.value = v;
      out.lo = v;
      out.witness = std::move(w);
    }
  };

  for (const auto& [pt, v] : x.entries()) {
    LowerWitness w;
    w.kind = LowerKind::SupNorm;
    w.point = pt;
    offer(abs(v), w);
  }

  const Rational c_hi = default_constant_C(config.p).c.hi;
  {
    LowerWitness w;
    w.kind = LowerKind::Rho;
    offer(root_enclosure(rho_sq(x), 2).lo / c_hi, w);
  }

  std::mt19937_64 rng = trial_stream(config.seed, "tau_lower", 0);
  const auto len = static_cast<std::size_t>(x.max_row());
  for (int s = 0; s < config.pairing_samples; ++s) {
    LowerWitness w;
    w.kind = LowerKind::Pairing;
    w.b = random_unit_b(rng, len, 8);
    Rational v = abs(z_pair(x, w.b)) / c_hi;
    offer(v, std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Micro oracle

namespace {

constexpr unsigned long kDyadicBits = 48;
constexpr int kCutCap = 400;
constexpr int kColumnCap = 600;

struct Coord {
  std::vector<TriPoint> points;
  std::map<TriPoint, std::size_t> index;
};

struct GroupData {
  std::set<std::int64_t> rows;
  std::vector<std::size_t> points;          // indices into Coord::points
  std::vector<BSeq> cands;
  std::vector<std::vector<int>> covers;     // cands x points (0/1)
};

struct PricePoint {
  Rational ub;
  Rational lb;
  TriVector piece;  // feasible, on the support
  UCertificate cert;
};

class Pricer {
 public:
  Pricer(const TriVector& ax, const Coord& coord, const LorentzParam& p, std::size_t cap)
      : coord_(coord), p_(p) {
    std::set<std::int64_t> row_set = ax.rows();
    rows_.assign(row_set.begin(), row_set.end());
    const std::size_t nr = rows_.size();
    for (unsigned mask = 1; mask < (1U << nr); ++mask) {
      GroupData g;
      for (std::size_t r = 0; r < nr; ++r) {
        if (mask & (1U << r)) g.rows.insert(rows_[r]);
      }
      for (std::size_t idx = 0; idx < coord.points.size(); ++idx) {
        if (g.rows.count(coord.points[idx].i)) g.points.push_back(idx);
      }
      g.cands = covering_candidates(ax.restrict_rows(g.rows), cap);
      for (const auto& b : g.cands) {
        std::vector<int> cov;
        for (std::size_t idx : g.points) {
          const TriPoint& pt = coord.points[idx];
          cov.push_back(b.count(pt.i) >= pt.j ? 1 : 0);
        }
        g.covers.push_back(std::move(cov));
      }
      groups_.emplace(mask, std::move(g));
    }
    for (std::int64_t n = 1; n <= static_cast<std::int64_t>(nr); ++n) {
      Interval w = index_weight(n, p);
      c_hi_.push_back(1 / w.lo);
      c_lo_.push_back(1 / w.hi);
    }
  }

  [[nodiscard]] std::size_t row_count() const { return rows_.size(); }

  PricePoint solve(unsigned mask, std::int64_t rank, const std::vector<Rational>& f, const Rational& inner_tol) {
    const GroupData& g = groups_.at(mask);
    auto& cuts = cuts_[{mask, rank}];
    const std::size_t nc = g.cands.size();
    const std::size_t np = g.points.size();
    const Rational& c_hi = c_hi_[static_cast<std::size_t>(rank - 1)];
    const Rational& c_lo = c_lo_[static_cast<std::size_t>(rank - 1)];

    for (int iter = 0; iter < kCutCap; ++iter) {
      // variables: w_0..w_{nc-1}, y_0..y_{np-1}
      lp::Matrix a(np + 1 + cuts.size(), nc + np);
      std::vector<Rational> rhs(a.rows, Rational(0));
      std::vector<Rational> obj(nc + np, Rational(0));
      for (std::size_t t = 0; t < np; ++t) {
        a(t, nc + t) = 1;
        for (std::size_t q = 0; q < nc; ++q) {
          if (g.covers[q][t]) a(t, q) = -1;
        }
        obj[nc + t] = f[g.points[t]];
      }
      for (std::size_t q = 0; q < nc; ++q) a(np, q) = 1;
      rhs[np] = 1;
      for (std::size_t c = 0; c < cuts.size(); ++c) {
        for (std::size_t t = 0; t < np; ++t) {
          const std::int64_t row = coord_.points[g.points[t]].i;
          a(np + 1 + c, nc + t) = cuts[c].at(row) / row;
        }
        rhs[np + 1 + c] = c_hi;
      }
      lp::Solution sol = lp::maximize(obj, a, rhs);

      TriVector y;
      for (std::size_t t = 0; t < np; ++t) {
        if (sol.primal[nc + t] != 0) y.set(coord_.points[g.points[t]], sol.primal[nc + t]);
      }
      const Rational r2 = rho_sq(y);
      Rational scale = 1;
      if (!within(r2, rank)) {
        scale = dyadic_floor(c_lo / root_enclosure(r2, 2, kDyadicBits + 16).hi, kDyadicBits);
        while (scale > 0 && !within(r2 * scale * scale, rank)) scale = dyadic_floor(scale * Rational(1023, 1024), kDyadicBits);
      }
      PricePoint out;
      out.ub = sol.value;
      out.piece = y * scale;
      out.lb = 0;
      for (const auto& [pt, v] : out.piece.entries()) out.lb += f[coord_.index.at(pt)] * v;
      out.cert.scale = scale;
      for (std::size_t q = 0; q < nc; ++q) {
        if (sol.primal[q] > 0) {
          out.cert.generators.push_back(g.cands[q]);
          out.cert.weights.push_back(sol.primal[q]);
        }
      }
      if (out.ub - out.lb <= inner_tol || scale == 1) return out;

      // Kelley cut along the row-average direction of y.
      std::map<std::int64_t, Rational> u;
      const Rational norm_hi = root_enclosure(r2, 2, kDyadicBits + 16).hi;
      Rational usq = 0;
      for (std::int64_t row : g.rows) {
        Rational avg = row_sum(y, row, RowSumMode::Absolute) / row;
        u[row] = dyadic_floor(avg / norm_hi, kDyadicBits);
        usq += u[row] * u[row];
      }
      if (usq > 1) throw InvariantError("micro oracle: cut direction exceeds unit length");
      cuts.push_back(std::move(u));
    }
    throw InvariantError("micro oracle: cutting-plane cap reached");
  }

 private:
  // rho^2 <= n^{-2/p}
  bool within(const Rational& r2, std::int64_t n) const {
    return pow(r2, static_cast<unsigned long>(p_.num())) *
               Rational(pow(Integer(static_cast<unsigned long>(n)), 2UL * static_cast<unsigned long>(p_.den()))) <=
           1;
  }

  const Coord& coord_;
  LorentzParam p_;
  std::vector<std::int64_t> rows_;
  std::map<unsigned, GroupData> groups_;
  std::map<std::pair<unsigned, std::int64_t>, std::vector<std::map<std::int64_t, Rational>>> cuts_;
  std::vector<Rational> c_hi_;
  std::vector<Rational> c_lo_;

 public:
  [[nodiscard]] const std::vector<std::int64_t>& rows() const { return rows_; }
};

TriVector dyadic_floor_vec(const TriVector& v) {
  TriVector out;
  for (const auto& [pt, x] : v.entries()) out.set(pt, dyadic_floor(x, kDyadicBits));
  return out;
}

}  // namespace

GaugeInterval tau_micro_oracle(const TriVector& x, const Rational& tol, const GaugeConfig& config) {
  if (tol <= 0) throw PreconditionError("tau_micro_oracle: tolerance must be positive");
  if (x.max_row() > kMicroRows) throw PreconditionError("tau_micro_oracle: support beyond row 3");
  GaugeInterval out;
  if (x.empty()) {
    out.lo = 0;
    out.hi = 0;
    return out;
  }
  const LorentzParam& p = config.p;
  const TriVector ax = x.abs();
  Coord coord;
  std::vector<Rational> demand;
  for (const auto& [pt, v] : ax.entries()) {
    coord.index[pt] = coord.points.size();
    coord.points.push_back(pt);
    demand.push_back(v);
  }
  const std::size_t np = coord.points.size();

  // Seeds: every maximal generator, and the atoms behind tau_upper.
  std::vector<ARepresentative> atoms;
  for (const auto& b : covering_candidates(ax, config.candidate_cap)) {
    TriVector piece;
    TriVector xb = x_b(b);
    for (const auto& pt : coord.points) {
      if (xb.get(pt) != 0) piece.set(pt, 1);
    }
    if (piece.empty()) continue;
    atoms.push_back(singleton_rep(piece, UCertificate{{b}, {Rational(1)}, Rational(1)}));
  }
  GaugeConfig upper_cfg = config;
  UpperBound ub = tau_upper(x, upper_cfg);
  for (const auto& rep : ub.cert.reps) {
    ARepresentative r = restrict_rep(rep, ax);
    for (auto& piece : r.pieces) piece = piece.abs();
    if (!r.sum().empty()) atoms.push_back(std::move(r));
  }
  for (const auto& a : atoms) {
    if (check_a_rep(a, p)) throw InvariantError("tau_micro_oracle: seed atom is not in A");
  }

  LowerBound base = tau_lower(x, config);
  out.lo = base.lo;
  out.lower = base.witness;

  Pricer pricer(ax, coord, p, config.candidate_cap);
  const std::size_t nr = pricer.row_count();
  const std::vector<std::int64_t>& rows = pricer.rows();

  // (group masks, ranks) combinations: a set partition of the support rows
  // together with an assignment of distinct ranks.
  std::vector<std::vector<std::pair<unsigned, std::int64_t>>> combos;
  for_each_set_partition(rows, [&](const std::vector<std::set<std::int64_t>>& groups) {
    std::vector<unsigned> masks;
    for (const auto& g : groups) {
      unsigned m = 0;
      for (std::size_t r = 0; r < nr; ++r) {
        if (g.count(rows[r])) m |= 1U << r;
      }
      masks.push_back(m);
    }
    std::vector<std::int64_t> ranks(groups.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) ranks[i] = static_cast<std::int64_t>(i + 1);
    do {
      std::vector<std::pair<unsigned, std::int64_t>> combo;
      for (std::size_t i = 0; i < masks.size(); ++i) combo.emplace_back(masks[i], ranks[i]);
      combos.push_back(std::move(combo));
    } while (std::next_permutation(ranks.begin(), ranks.end()));
  });

  Rational inner_tol = tol / 8;
  for (int iter = 0; iter < kColumnCap; ++iter) {
    out.iterations = iter + 1;
    lp::Matrix k(np, atoms.size());
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      TriVector s = atoms[a].sum();
      for (std::size_t t = 0; t < np; ++t) k(t, a) = s.get(coord.points[t]);
    }
    lp::CoverSolution master = lp::min_cover(k, demand);
    out.hi = master.value;
    out.upper = VCertificate{};
    out.upper.scale = master.value;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (master.weights[a] > 0) {
        out.upper.weights.push_back(master.weights[a] / master.value);
        out.upper.reps.push_back(atoms[a]);
      }
    }

    std::vector<Rational> f(np);
    Rational pairing = 0;
    for (std::size_t t = 0; t < np; ++t) {
      f[t] = dyadic_floor(master.dual[t], kDyadicBits);
      pairing += f[t] * demand[t];
    }
    const Rational tol_scaled = inner_tol / std::max(Rational(1), master.value);

    std::map<std::pair<unsigned, std::int64_t>, PricePoint> priced;
    Rational h_up = 0;
    Rational best_lb = -1;
    const std::vector<std::pair<unsigned, std::int64_t>>* best_combo = nullptr;
    for (const auto& combo : combos) {
      Rational sum_ub = 0;
      Rational sum_lb = 0;
      for (const auto& key : combo) {
        auto it = priced.find(key);
        if (it == priced.end()) it = priced.emplace(key, pricer.solve(key.first, key.second, f, tol_scaled)).first;
        sum_ub += it->second.ub;
        sum_lb += it->second.lb;
      }
      h_up = std::max(h_up, sum_ub);
      if (sum_lb > best_lb) {
        best_lb = sum_lb;
        best_combo = &combo;
      }
    }
    if (h_up > 0) {
      Rational lo = pairing / h_up;
      if (lo > out.lo) {
        out.lo = lo;
        out.lower = LowerWitness{};
        out.lower.kind = LowerKind::Dual;
        for (std::size_t t = 0; t < np; ++t) {
          if (f[t] != 0) out.lower.dual.set(coord.points[t], f[t]);
        }
        out.lower.dual_bound = h_up;
        out.lower.value = lo;
      }
    }
    if (out.hi - out.lo <= tol) break;

    // New atom from the best feasible combination.
    std::vector<std::pair<TriVector, UCertificate>> pieces;
    Rational value = 0;
    for (const auto& key : *best_combo) {
      const PricePoint& pp = priced.at(key);
      if (pp.piece.empty()) continue;
      TriVector piece = dyadic_floor_vec(pp.piece);
      for (const auto& [pt, v] : piece.entries()) value += f[coord.index.at(pt)] * v;
      pieces.emplace_back(std::move(piece), pp.cert);
    }
    if (value <= 1 || pieces.empty()) {
      inner_tol /= 4;
      continue;
    }
    atoms.push_back(make_a_rep(std::move(pieces), p));
    if (iter + 1 == kColumnCap) break;
  }
  if (out.hi - out.lo > tol) {
    std::ostringstream os;
    os << "tau_micro_oracle: tolerance not reached after " << out.iterations << " iterations (lo=" << to_double(out.lo)
       << ", hi=" << to_double(out.hi) << ")";
    throw InvariantError(os.str());
  }
  if (!out.upper.certifies(x, p)) throw InvariantError("tau_micro_oracle: upper certificate fails re-check");
  return out;
}

// ---------------------------------------------------------------------------
// Quotient witness

QuotientWitness quotient_witness(std::span<const Rational> b) {
  if (l2_norm_sq(b) != 1) throw PreconditionError("quotient_witness: b must have unit l2 norm exactly");
  QuotientWitness w;
  Rational head = 0;
  for (std::size_t i = 0; i < b.size() && i < 4; ++i) head += b[i] * b[i];
  std::vector<std::int64_t> m(b.size(), 0);
  if (head >= Rational(5, 9)) {
    w.branch = 1;
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < b.size() && i < 4; ++i) {
      if (abs(b[i]) > abs(b[i0])) i0 = i;
    }
    const auto row = static_cast<std::int64_t>(i0 + 1);
    m[i0] = row;
    const int sgn = b[i0] < 0 ? -1 : 1;
    w.y = TriVector::row_ones(row) * Rational(sgn);
  } else {
    w.branch = 2;
    for (std::size_t i = 4; i < b.size(); ++i) {
      const auto row = static_cast<std::int64_t>(i + 1);
      m[i] = floor(row * abs(b[i])).get_si();
      const Rational sgn = b[i] < 0 ? -1 : 1;
      for (std::int64_t j = 1; j <= m[i]; ++j) w.y.set(row, j, sgn);
    }
  }
  w.generator = BSeq(m);
  w.pairing = z_pair(w.y, b);
  UCertificate cert{{w.generator}, {Rational(1)}, Rational(1)};
  w.cert = single_rep_cert(singleton_rep(w.y.abs(), cert), Rational(1));
  return w;
}

bool check_quotient_witness(const QuotientWitness& w, std::span<const Rational> b, const LorentzParam& p) {
  if (!w.cert.certifies(w.y, p) || w.cert.scale != 1) return false;
  return z_pair(w.y, b) == w.pairing;
}

}  // namespace gaugecert

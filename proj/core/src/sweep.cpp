#include "gaugecert/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "gaugecert/gauge.hpp"
#include "gaugecert/random.hpp"
#include "gaugecert/report.hpp"
#include "json.hpp"

namespace gaugecert {

using nlohmann::json;

namespace {

json q(const Rational& v) { return to_string(v); }

json q_list(std::span<const Rational> v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(q(x));
  return out;
}

json bseq_list(std::span<const BSeq> bs) {
  json out = json::array();
  for (const auto& b : bs) out.push_back(format_bseq(b));
  return out;
}

template <class T>
void shuffle(std::mt19937_64& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i - 1)));
    std::swap(v[i - 1], v[j]);
  }
}

bool coin(std::mt19937_64& rng, int percent) { return uniform_int(rng, 0, 99) < percent; }

// Lower bound for t^{-2/p}.
Rational neg_two_over_p_lo(std::int64_t t, const LorentzParam& p) {
  Rational hi = index_weight(t, p).hi;
  return 1 / (hi * hi);
}

// Largest m <= want with (m/i)^2 <= room.
std::int64_t fit_count(std::int64_t want, std::int64_t i, const Rational& room) {
  std::int64_t m = want;
  while (m > 0 && ratio(m * m, i * i) > room) --m;
  return m;
}

BSeq random_bseq_on(std::mt19937_64& rng, const std::vector<std::int64_t>& rows) {
  std::int64_t len = rows.empty() ? 0 : *std::max_element(rows.begin(), rows.end());
  std::vector<std::int64_t> m(static_cast<std::size_t>(len), 0);
  Rational room = 1;
  for (auto i : rows) {
    std::int64_t c = fit_count(uniform_int(rng, 0, i), i, room);
    m[static_cast<std::size_t>(i - 1)] = c;
    room -= ratio(c * c, i * i);
  }
  return BSeq(m);
}

}  // namespace

// ---------------------------------------------------------------------------
// Instance families

std::vector<Rational> select_instance(std::mt19937_64& rng, std::size_t max_len) {
  if (max_len < 2) throw PreconditionError("select_instance: need max_len >= 2");
  for (;;) {
    auto len = static_cast<std::size_t>(uniform_int(rng, 2, static_cast<std::int64_t>(max_len)));
    std::vector<Rational> a;
    Rational sum = 0;
    const int zero_pct = static_cast<int>(uniform_int(rng, 0, 40));
    const std::int64_t den = uniform_int(rng, 1, 4) == 1 ? 2 : uniform_int(rng, 2, 64);
    for (std::size_t i = 0; i < len; ++i) {
      Rational v = coin(rng, zero_pct) ? Rational(0) : uniform_unit_rational(rng, den);
      sum += v;
      a.push_back(v);
    }
    if (sum > 1) return a;
  }
}

UnitMatrix matrix_instance(std::mt19937_64& rng, std::int64_t max_dim) {
  std::int64_t k = uniform_int(rng, 1, max_dim);
  std::int64_t l = uniform_int(rng, 1, max_dim);
  UnitMatrix a(k, l);
  const int zero_pct = static_cast<int>(uniform_int(rng, 0, 60));
  const std::int64_t den = uniform_int(rng, 1, 16);
  for (std::int64_t i = 1; i <= k; ++i) {
    for (std::int64_t j = 1; j <= l; ++j) {
      if (!coin(rng, zero_pct)) a.set(i, j, uniform_unit_rational(rng, den));
    }
  }
  return a;
}

std::vector<std::vector<Rational>> kdisjoint_family(std::mt19937_64& rng, std::int64_t k, std::int64_t n,
                                                    std::int64_t len) {
  std::vector<std::vector<Rational>> xs(static_cast<std::size_t>(n),
                                       std::vector<Rational>(static_cast<std::size_t>(len), Rational(0)));
  std::vector<std::size_t> members(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;
  for (std::int64_t c = 0; c < len; ++c) {
    shuffle(rng, members);
    std::int64_t used = uniform_int(rng, 0, std::min(k, n));
    for (std::int64_t t = 0; t < used; ++t) {
      Rational v(uniform_int(rng, -8, 8), uniform_int(rng, 1, 8));
      v.canonicalize();
      xs[members[static_cast<std::size_t>(t)]][static_cast<std::size_t>(c)] = v;
    }
  }
  for (auto& x : xs) {
    Rational s = l2_norm_sq(x);
    if (s == 0) continue;
    // Scale onto (or just inside) the unit sphere.
    Rational f = 1 / root_enclosure(s, 2, 32).hi;
    for (auto& v : x) v *= f;
  }
  return xs;
}

std::vector<BSeq> smallsup_generators(std::mt19937_64& rng, const Rational& epsilon, std::int64_t m,
                                      std::int64_t rows, bool heavy) {
  if (m < 1 || rows < 1) throw PreconditionError("smallsup_generators: need M >= 1 and rows >= 1");
  const std::int64_t cap = floor(epsilon * m).get_si();
  std::vector<std::int64_t> usage(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<BSeq> out;
  for (std::int64_t q = 0; q < m; ++q) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(rows), 0);
    Rational room = 1;
    const std::int64_t attempts = heavy ? rows : uniform_int(rng, 1, 6);
    for (std::int64_t t = 0; t < attempts; ++t) {
      std::int64_t i = uniform_int(rng, 1, rows);
      auto& slot = counts[static_cast<std::size_t>(i - 1)];
      if (slot != 0 || usage[static_cast<std::size_t>(i)] >= cap) continue;
      std::int64_t want = heavy ? uniform_int(rng, (i + 1) / 2, i) : uniform_int(rng, 1, i);
      std::int64_t c = fit_count(want, i, room);
      if (c == 0) continue;
      slot = c;
      room -= ratio(c * c, i * i);
      ++usage[static_cast<std::size_t>(i)];
    }
    out.emplace_back(std::move(counts));
  }
  return out;
}

std::vector<Rational> block_sequence_sq(std::mt19937_64& rng, const LorentzParam& p,
                                        std::vector<std::int64_t>& breakpoints) {
  std::vector<Rational> a;
  breakpoints = {0};
  const std::int64_t blocks = uniform_int(rng, 1, 6);
  for (std::int64_t b = 0; b < blocks; ++b) {
    const auto n = static_cast<std::int64_t>(a.size());
    const std::int64_t len = uniform_int(rng, 1, 12);
    const Rational cap = n > 0 ? neg_two_over_p_lo(n, p) : Rational(1);
    std::vector<Rational> block;
    for (std::int64_t j = 1; j <= len; ++j) {
      Rational bound = std::min(cap, neg_two_over_p_lo(j, p));
      Rational u = coin(rng, 30) ? Rational(1) : uniform_unit_rational(rng, 16);
      block.push_back(bound * u);
    }
    shuffle(rng, block);
    a.insert(a.end(), block.begin(), block.end());
    breakpoints.push_back(static_cast<std::int64_t>(a.size()));
  }
  return a;
}

ARepresentative random_a_rep(std::mt19937_64& rng, std::int64_t first_row, std::int64_t span,
                             const LorentzParam& p) {
  const std::int64_t npieces = uniform_int(rng, 1, std::min<std::int64_t>(3, span));
  std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(npieces));
  for (std::int64_t r = first_row; r < first_row + span; ++r) {
    std::int64_t g = uniform_int(rng, -1, npieces - 1);
    if (g >= 0) rows[static_cast<std::size_t>(g)].push_back(r);
  }
  std::vector<std::pair<TriVector, UCertificate>> pieces;
  std::vector<Rational> rho;
  for (const auto& rs : rows) {
    if (rs.empty()) continue;
    const std::int64_t gens = uniform_int(rng, 1, 3);
    UCertificate cert;
    TriVector y;
    for (std::int64_t g = 0; g < gens; ++g) {
      BSeq b = random_bseq_on(rng, rs);
      cert.generators.push_back(b);
      cert.weights.push_back(Rational(1, static_cast<long>(gens)));
      y += x_b(b);
    }
    y *= Rational(1, static_cast<long>(gens));
    rho.push_back(rho_sq(y));
    pieces.emplace_back(std::move(y), std::move(cert));
  }
  const Rational s = lorentz_value_sq(rho, p).hi;
  if (s > 1) {
    const Rational c = 1 / dyadic_ceil(s, 16);
    for (auto& [y, cert] : pieces) {
      y *= c;
      cert.scale = c;
    }
  }
  return make_a_rep(std::move(pieces), p);
}

VCertificate random_v_certificate(std::mt19937_64& rng, std::int64_t max_row, const LorentzParam& p) {
  VCertificate c;
  const std::int64_t n = uniform_int(rng, 1, 4);
  std::vector<Rational> raw;
  Rational total = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t first = uniform_int(rng, 1, max_row);
    std::int64_t span = uniform_int(rng, 1, max_row - first + 1);
    c.reps.push_back(random_a_rep(rng, first, span, p));
    raw.emplace_back(uniform_int(rng, 1, 12));
    total += raw.back();
  }
  const Rational slack(uniform_int(rng, 0, 6));
  for (auto& w : raw) c.weights.push_back(w / (total + slack));
  c.scale = 1;
  return c;
}

TriVector micro_instance(std::mt19937_64& rng) {
  const std::int64_t kind = uniform_int(rng, 0, 3);
  if (kind == 0) {
    TriVector x = TriVector::row_ones(uniform_int(rng, 1, 3));
    return coin(rng, 50) ? x : x * Rational(-1);
  }
  if (kind == 1) {
    // Scaled generator.
    BSeq b = random_bseq_on(rng, {1, 2, 3});
    return x_b(b) * uniform_unit_rational(rng, 8);
  }
  TriVector x;
  const std::int64_t den = uniform_int(rng, 1, 8);
  const Rational scale = kind == 2 ? Rational(1) : Rational(1, static_cast<long>(uniform_int(rng, 2, 6)));
  for (std::int64_t i = 1; i <= 3; ++i) {
    for (std::int64_t j = 1; j <= i; ++j) {
      if (coin(rng, 40)) continue;
      Rational v = uniform_unit_rational(rng, den) * scale;
      x.set(i, j, coin(rng, 25) ? Rational(-v) : v);
    }
  }
  if (x.empty()) x.set(1, 1, Rational(1, 2));
  return x;
}

std::vector<ARepresentative> strongly_decreasing_family(std::mt19937_64& rng, std::size_t len,
                                                        const LorentzParam& p) {
  std::vector<ARepresentative> out;
  std::int64_t next_row = 1;
  std::int64_t total = 0;
  for (std::size_t k = 0; k < len; ++k) {
    const std::int64_t npieces = uniform_int(rng, 1, 3);
    std::vector<std::pair<TriVector, UCertificate>> pieces;
    for (std::int64_t l = 1; l <= npieces; ++l) {
      const std::int64_t i = next_row + uniform_int(rng, 0, 1);
      next_row = i + 1;
      // rho^2 <= min(l^{-2/p}, (total+1)^{-2/p}) with a little random decay.
      Rational bound = std::min(neg_two_over_p_lo(l, p), neg_two_over_p_lo(total + 1, p));
      bound *= Rational(uniform_int(rng, 1, 4), 4);
      const std::int64_t m = uniform_int(rng, 1, i);
      Rational c = dyadic_floor(root_enclosure(bound, 2, 32).lo * ratio(i, m), 20);
      if (c > 1) c = 1;
      if (c == 0) continue;
      std::vector<std::int64_t> counts(static_cast<std::size_t>(i), 0);
      counts[static_cast<std::size_t>(i - 1)] = m;
      BSeq b(counts);
      pieces.emplace_back(x_b(b) * c, UCertificate{{b}, {Rational(1)}, c});
    }
    ARepresentative rep = make_a_rep(std::move(pieces), p);
    total += static_cast<std::int64_t>(rep.length());
    out.push_back(std::move(rep));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

using Metrics = std::map<std::string, std::string>;

struct Outcome {
  json input;
  std::string digest;
  Metrics metrics;
  std::vector<std::string> problems;
  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

Rational epsilon_for(const SweepConfig& c, std::uint64_t trial, std::initializer_list<Rational> rotation) {
  if (c.epsilon) return *c.epsilon;
  std::vector<Rational> r(rotation);
  return r[trial % r.size()];
}

std::int64_t m_for(std::mt19937_64& rng, const Rational& eps, std::int64_t max_m) {
  const std::int64_t den = eps.get_den().get_si();
  const std::int64_t units = std::max<std::int64_t>(1, max_m / den);
  return den * uniform_int(rng, 1, units);
}

void suite_select(const SweepConfig&, std::uint64_t trial, std::mt19937_64& rng, Outcome& o) {
  std::vector<Rational> a = select_instance(rng, trial % 2 == 0 ? 12 : 64);
  o.input = json{{"a", q_list(a)}};
  std::vector<std::size_t> s = select_subset(a);
  Rational sum = 0;
  json idx = json::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    o.require(s[k] < a.size(), "index out of range");
    o.require(k == 0 || s[k] > s[k - 1], "indices not strictly increasing");
    if (s[k] < a.size()) sum += a[s[k]];
    idx.push_back(s[k]);
  }
  o.require(!s.empty(), "empty selection");
  o.require(sum >= Rational(1, 2) && sum <= 1, "selected sum outside [1/2, 1]");
  o.digest = fnv1a_hex(idx.dump());
  o.metrics["sum"] = to_string(sum);
  o.metrics["len"] = std::to_string(a.size());
}

void suite_partition(const SweepConfig&, std::uint64_t, std::mt19937_64& rng, Outcome& o) {
  UnitMatrix a = matrix_instance(rng, 20);
  json rows = json::array();
  for (std::int64_t i = 1; i <= a.rows(); ++i) {
    json row = json::array();
    for (std::int64_t j = 1; j <= a.cols(); ++j) row.push_back(q(a.at(i, j)));
    rows.push_back(std::move(row));
  }
  o.input = json{{"rows", rows}};
  const Rational bound = a.total();
  PartitionResult r = partition_matrix(a, bound);
  o.require(check_partition(a, r), "partition check failed");
  json parts = json::array();
  for (const auto& part : r.parts) {
    json pj = json::array();
    for (const auto& c : part) pj.push_back(json::array({c.row, c.col}));
    parts.push_back(std::move(pj));
  }
  o.digest = fnv1a_hex(parts.dump());
  o.metrics["parts"] = std::to_string(r.parts.size());
  o.metrics["reductions"] = std::to_string(r.reductions);
  o.metrics["bound"] = to_string(bound);
}

void suite_disjoint(const SweepConfig&, std::uint64_t, std::mt19937_64& rng, Outcome& o) {
  const std::int64_t k = uniform_int(rng, 1, 5);
  const std::int64_t n = uniform_int(rng, 1, 50);
  const std::int64_t len = uniform_int(rng, 1, 40);
  auto xs = kdisjoint_family(rng, k, n, len);
  json fam = json::array();
  for (const auto& x : xs) fam.push_back(q_list(x));
  o.input = json{{"k", k}, {"family", fam}};
  std::vector<Rational> sum(static_cast<std::size_t>(len), Rational(0));
  for (const auto& x : xs) {
    o.require(l2_norm_sq(x) <= 1, "member outside the unit ball");
    for (std::size_t c = 0; c < x.size(); ++c) sum[c] += x[c];
  }
  for (std::int64_t c = 0; c < len; ++c) {
    std::int64_t nz = 0;
    for (const auto& x : xs) nz += x[static_cast<std::size_t>(c)] != 0 ? 1 : 0;
    o.require(nz <= k, "family is not k-disjoint");
  }
  const Rational ns = l2_norm_sq(sum);
  const Rational kn(k * n);
  o.require(ns <= kn, "||sum||^2 > k n");
  o.digest = fnv1a_hex(q_list(sum).dump());
  o.metrics["norm_sq"] = to_string(ns);
  o.metrics["ratio"] = to_string(ns / kn);
}

void suite_smallrho(const SweepConfig& c, std::uint64_t trial, std::mt19937_64& rng, Outcome& o) {
  const Rational eps = epsilon_for(c, trial, {Rational(1, 4), Rational(1, 16), Rational(1, 64)});
  const std::int64_t m = m_for(rng, eps, c.max_m);
  const std::int64_t rows = uniform_int(rng, 1, c.max_row);
  auto bs = smallsup_generators(rng, eps, m, rows, coin(rng, 50));
  o.input = json{{"epsilon", q(eps)}, {"generators", bseq_list(bs)}};
  TriVector x = average_generators(bs);
  o.require(sup_norm(x) <= eps, "instance sup norm exceeds epsilon");
  const Rational r2 = rho_sq(x);
  o.require(r2 <= eps, "rho^2 > epsilon");
  o.digest = fnv1a_hex(to_json(x));
  o.metrics["rho_sq"] = to_string(r2);
  o.metrics["ratio"] = to_string(r2 / eps);
}

void suite_blocks(const SweepConfig& c, std::uint64_t, std::mt19937_64& rng, Outcome& o) {
  std::vector<std::int64_t> br;
  std::vector<Rational> a_sq = block_sequence_sq(rng, c.p, br);
  o.input = json{{"a_sq", q_list(a_sq)}, {"breakpoints", br}};
  o.require(check_block_conditions_sq(a_sq, br, c.p), "constructed sequence fails the block conditions");
  o.require(lorentz_le_powered(a_sq, Rational(4), 2, c.p), "weak-l^p norm exceeds 2");
  const Interval v = lorentz_value_sq(a_sq, c.p);
  o.digest = fnv1a_hex(q_list(a_sq).dump());
  o.metrics["lorentz_hi"] = to_string(dyadic_ceil(v.hi, 32));
}

void suite_mainlemma(const SweepConfig& c, std::uint64_t trial, std::mt19937_64& rng, Outcome& o) {
  const Rational eps = epsilon_for(c, trial, {Rational(1, 4), Rational(1, 16)});
  const std::int64_t m = m_for(rng, eps, c.max_m);
  const std::int64_t rows = uniform_int(rng, 1, std::min<std::int64_t>(50, c.max_row));
  auto bs = smallsup_generators(rng, eps, m, rows, coin(rng, 50));
  o.input = json{{"epsilon", q(eps)}, {"generators", bseq_list(bs)}};
  DecompositionCertificate cert = main_decompose(bs, eps, c.p);
  VerifyReport vr = verify_decomposition(cert);
  for (const auto& f : vr.failures) o.problems.push_back(f);
  o.require(check_a_rep(decomposition_rep(cert), c.p) == std::nullopt, "decomposition is not an A-representative");
  o.digest = digest(cert);
  Rational max_ratio = 0;
  for (const auto& b : cert.blocks) max_ratio = std::max(max_ratio, ratio(static_cast<long>(b.pieces.size()), m));
  o.metrics["t"] = std::to_string(cert.blocks.size());
  o.metrics["scale"] = to_string(cert.scale);
  o.metrics["max_r_over_m"] = to_string(max_ratio);
  o.metrics["m"] = std::to_string(m);
}

void suite_quotient(const SweepConfig& c, std::uint64_t, std::mt19937_64& rng, Outcome& o) {
  const auto len = static_cast<std::size_t>(uniform_int(rng, 1, 12));
  std::vector<Rational> b = random_unit_b(rng, len, 6, static_cast<double>(uniform_int(rng, 3, 10)) / 10.0);
  QuotientWitness w = quotient_witness(b);
  o.require(w.pairing >= Rational(2, 9), "quotient pairing below 2/9");
  o.require(check_quotient_witness(w, b, c.p), "quotient witness fails re-check");

  VCertificate vc = random_v_certificate(rng, std::min<std::int64_t>(c.max_row, 12), c.p);
  TriVector v = vc.hull_point();
  TriVector signed_v;
  for (const auto& [pt, val] : v.entries()) signed_v.set(pt, coin(rng, 30) ? Rational(-val) : val);
  o.require(vc.certifies(signed_v, c.p), "sampled V-certificate fails re-check");
  std::vector<Rational> b2 = random_unit_b(rng, static_cast<std::size_t>(std::max<std::int64_t>(1, signed_v.max_row())), 6);
  const ConstantC& cc = default_constant_C(c.p);
  const Rational zp = abs(z_pair(signed_v, b2));
  const Rational r2 = rho_sq(signed_v);
  o.require(zp <= cc.c.hi, "z_pair(v, b) > C_hi");
  o.require(r2 <= cc.c.hi * cc.c.hi, "rho(v)^2 > C_hi^2");
  o.require(cc.c.width() <= Rational(1, 1000), "C enclosure wider than 1e-3");

  o.input = json{{"b", q_list(b)}, {"v", json::parse(to_json(signed_v))}, {"v_cert", json::parse(to_json(vc))},
                 {"b2", q_list(b2)}};
  o.digest = digest(w);
  o.metrics["branch"] = std::to_string(w.branch);
  o.metrics["pairing"] = to_string(w.pairing);
  o.metrics["z_pair_abs"] = to_string(zp);
  o.metrics["rho_sq_v"] = to_string(r2);
}

bool is_unit_xb(const TriVector& x) {
  TriVector ax = x.abs();
  Rational norm = 0;
  for (std::int64_t i : ax.rows()) {
    std::int64_t m = 0;
    for (std::int64_t j = 1; j <= i; ++j) {
      Rational v = ax.get(i, j);
      if (v == 1 && m == j - 1) {
        m = j;
      } else if (v != 0) {
        return false;
      }
    }
    if (m == 0) return false;
    norm += ratio(m * m, i * i);
  }
  return !ax.empty() && norm == 1;
}

void suite_sandwich(const SweepConfig& c, std::uint64_t trial, std::mt19937_64& rng, Outcome& o) {
  TriVector x = micro_instance(rng);
  o.input = json{{"x", json::parse(to_json(x))}};
  GaugeConfig gc;
  gc.p = c.p;
  gc.seed = splitmix64(c.seed ^ trial);
  LowerBound lo = tau_lower(x, gc);
  UpperBound up = tau_upper(x, gc);
  GaugeInterval g = tau_micro_oracle(x, c.tol, gc);
  o.require(lo.lo <= g.lo, "tau_lower > oracle.lo");
  o.require(g.lo <= g.hi, "oracle.lo > oracle.hi");
  o.require(g.hi <= up.hi, "oracle.hi > tau_upper");
  o.require(g.hi - g.lo <= c.tol, "oracle width above tolerance");
  o.require(up.cert.certifies(x, c.p), "tau_upper certificate fails re-check");
  o.require(g.upper.certifies(x, c.p), "oracle certificate fails re-check");
  if (is_unit_xb(x)) {
    const Rational c_hi = default_constant_C(c.p).c.hi;
    const Rational floor_lo = 1 / c_hi - c.tol;
    o.require(g.lo >= floor_lo && g.hi <= 1, "unit x_b interval outside [1/C_hi - tol, 1]");
    o.metrics["unit_xb"] = "1";
  }
  o.digest = fnv1a_hex(to_json(g) + to_json(up) + to_json(lo));
  o.metrics["lower"] = to_string(lo.lo);
  o.metrics["oracle_lo"] = to_string(g.lo);
  o.metrics["oracle_hi"] = to_string(g.hi);
  o.metrics["upper"] = to_string(up.hi);
  o.metrics["width"] = to_string(g.hi - g.lo);
}

void suite_split(const SweepConfig& c, std::uint64_t trial, std::mt19937_64& rng, Outcome& o) {
  const Rational eps = epsilon_for(c, trial, {Rational(1, 16), Rational(1, 64), Rational(1, 256)});
  const std::int64_t den = eps.get_den().get_si();
  const std::int64_t m = den * uniform_int(rng, 1, std::max<std::int64_t>(1, std::min<std::int64_t>(c.max_m, 512) / den));
  const std::int64_t rows = uniform_int(rng, 2, std::min<std::int64_t>(30, std::max<std::int64_t>(2, c.max_row)));
  auto bs = smallsup_generators(rng, eps, m, rows, coin(rng, 70));
  std::vector<ARepresentative> reps;
  std::vector<Rational> weights;
  for (const auto& b : bs) {
    if (b.is_zero()) continue;
    std::vector<std::int64_t> lo_counts = b.counts();
    std::vector<std::int64_t> hi_counts(lo_counts.size(), 0);
    const auto cut = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(lo_counts.size())));
    for (std::size_t i = cut; i < lo_counts.size(); ++i) std::swap(lo_counts[i], hi_counts[i]);
    BSeq b1(lo_counts);
    BSeq b2(hi_counts);
    std::optional<ARepresentative> rep;
    if (!b1.is_zero() && !b2.is_zero() && coin(rng, 50)) {
      try {
        rep = make_a_rep({{x_b(b1), UCertificate{{b1}, {Rational(1)}, Rational(1)}},
                          {x_b(b2), UCertificate{{b2}, {Rational(1)}, Rational(1)}}},
                         c.p);
      } catch (const ARepRejected&) {
      }
    }
    if (!rep) rep = singleton_rep(x_b(b), UCertificate{{b}, {Rational(1)}, Rational(1)});
    reps.push_back(std::move(*rep));
    weights.emplace_back(1, m);
  }
  json rj = json::array();
  for (const auto& r : reps) rj.push_back(json::parse(to_json(r)));
  o.input = json{{"epsilon", q(eps)}, {"weights", q_list(weights)}, {"reps", rj}};
  if (reps.empty()) {
    o.metrics["empty"] = "1";
    o.digest = fnv1a_hex("empty");
    return;
  }
  SplitResult s = split_v_element(weights, reps, eps, c.p);
  VerifyReport vr = verify_split(s, reps, eps, c.p);
  for (const auto& f : vr.failures) o.problems.push_back(f);
  o.digest = digest(s);
  std::size_t large = 0;
  for (auto n : s.large_counts) large += n;
  o.metrics["tau_v_bound"] = to_string(s.tau_v_bound);
  o.metrics["r"] = std::to_string(s.r);
  o.metrics["large"] = std::to_string(large);
}

void suite_merge(const SweepConfig& c, std::uint64_t, std::mt19937_64& rng, Outcome& o) {
  auto reps = strongly_decreasing_family(rng, 50, c.p);
  json rj = json::array();
  for (const auto& r : reps) rj.push_back(json::parse(to_json(r)));
  o.input = json{{"reps", rj}};
  MergeResult mr = merge_blocks(reps, c.p);
  o.require(!mr.selected.empty(), "nothing selected");
  for (bool b : mr.prefix_certified) o.require(b, "prefix rho-vector above 2");
  // Independent re-check: half of every selected prefix is a valid representative.
  ARepresentative half;
  for (std::size_t idx : mr.selected) {
    const auto& rep = reps[idx];
    for (std::size_t l = 0; l < rep.length(); ++l) {
      UCertificate cert = rep.certs[l];
      for (auto& w : cert.weights) w /= 2;
      half.pieces.push_back(rep.pieces[l] * Rational(1, 2));
      half.certs.push_back(std::move(cert));
      half.rho_sq.push_back(rep.rho_sq[l] / 4);
    }
    o.require(check_a_rep(half, c.p) == std::nullopt, "half prefix sum is not in A");
  }
  o.digest = digest(mr.half_sum);
  o.metrics["selected"] = std::to_string(mr.selected.size());
  o.metrics["length"] = std::to_string(mr.half_sum.length());
}

using SuiteFn = void (*)(const SweepConfig&, std::uint64_t, std::mt19937_64&, Outcome&);

const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> table{
      {"select", suite_select},       {"partition", suite_partition}, {"disjoint", suite_disjoint},
      {"smallrho", suite_smallrho},       {"blocks", suite_blocks},       {"mainlemma", suite_mainlemma},
      {"quotient", suite_quotient},   {"sandwich", suite_sandwich},   {"split", suite_split},
      {"merge", suite_merge},
  };
  return table;
}

json config_json(const SweepConfig& c) {
  json j;
  j["suite"] = c.suite;
  j["p"] = c.p.str();
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["max_row"] = c.max_row;
  j["max_m"] = c.max_m;
  j["epsilon"] = c.epsilon ? json(to_string(*c.epsilon)) : json(nullptr);
  j["tol"] = to_string(c.tol);
  return j;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : suites()) out.push_back(name);
    return out;
  }();
  return names;
}

void validate(const SweepConfig& c) {
  if (!suites().count(c.suite)) throw PreconditionError("unknown suite '" + c.suite + "'");
  if (c.trials < 1) throw PreconditionError("trials must be >= 1");
  if (c.max_row < 1 || c.max_row > 200) throw PreconditionError("max_row must lie in [1, 200]");
  if (c.max_m < 1 || c.max_m > 4096) throw PreconditionError("max_m must lie in [1, 4096]");
  if (c.epsilon && (*c.epsilon <= 0 || *c.epsilon >= 1)) throw PreconditionError("epsilon must lie in (0, 1)");
  if (c.epsilon && c.epsilon->get_den() > c.max_m) throw PreconditionError("denominator of epsilon exceeds max_m");
  if (c.tol <= 0) throw PreconditionError("tolerance must be positive");
}

std::vector<const TrialRecord*> Report::failures() const {
  std::vector<const TrialRecord*> out;
  for (const auto& r : records) {
    if (!r.pass) out.push_back(&r);
  }
  return out;
}

TrialRecord run_trial(const SweepConfig& config, std::uint64_t trial) {
  validate(config);
  TrialRecord rec;
  rec.trial = trial;
  std::mt19937_64 rng = trial_stream(config.seed, config.suite, trial);
  Outcome o;
  try {
    suites().at(config.suite)(config, trial, rng, o);
  } catch (const std::exception& e) {
    o.problems.push_back(std::string("exception: ") + e.what());
  }
  rec.input = o.input.is_null() ? "{}" : o.input.dump();
  rec.digest = o.digest;
  rec.metrics = std::move(o.metrics);
  rec.pass = o.problems.empty();
  for (const auto& p : o.problems) rec.failure += (rec.failure.empty() ? "" : "; ") + p;
  return rec;
}

Report run_suite(const SweepConfig& config) {
  validate(config);
  Report rep;
  rep.suite = config.suite;
  rep.config = config;
  const auto n = static_cast<std::size_t>(config.trials);
  rep.records.resize(n);
  const unsigned threads = std::max(1U, std::min<unsigned>(config.threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t t = 0; t < n; ++t) rep.records[t] = run_trial(config, t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < n; t = next++) rep.records[t] = run_trial(config, t);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::map<std::string, std::pair<Rational, Rational>> range;
  std::size_t failures = 0;
  for (const auto& r : rep.records) {
    if (!r.pass) ++failures;
    for (const auto& [k, v] : r.metrics) {
      Rational x;
      try {
        x = parse_rational(v);
      } catch (const PreconditionError&) {
        continue;
      }
      auto it = range.find(k);
      if (it == range.end()) {
        range.emplace(k, std::make_pair(x, x));
      } else {
        it->second.first = std::min(it->second.first, x);
        it->second.second = std::max(it->second.second, x);
      }
    }
  }
  for (const auto& [k, mm] : range) {
    rep.stats["min_" + k] = to_string(mm.first);
    rep.stats["max_" + k] = to_string(mm.second);
  }
  rep.stats["trials"] = std::to_string(n);
  rep.stats["failures"] = std::to_string(failures);
  if (config.suite == "quotient" || config.suite == "sandwich") {
    const ConstantC& cc = default_constant_C(config.p);
    rep.stats["C_lo"] = to_string(cc.c.lo);
    rep.stats["C_hi"] = to_string(cc.c.hi);
    rep.stats["C_width"] = to_string(cc.c.width());
  }
  return rep;
}

std::string report_json(const Report& report) {
  json j;
  j["suite"] = report.suite;
  j["config"] = config_json(report.config);
  j["records"] = json::array();
  json failures = json::array();
  for (const auto& r : report.records) {
    json rj;
    rj["trial"] = r.trial;
    rj["pass"] = r.pass;
    rj["input"] = json::parse(r.input);
    rj["digest"] = r.digest;
    rj["metrics"] = r.metrics;
    if (!r.pass) {
      rj["failure"] = r.failure;
      failures.push_back(json{{"trial", r.trial}, {"message", r.failure}});
    }
    j["records"].push_back(std::move(rj));
  }
  j["failures"] = failures;
  j["stats"] = report.stats;
  j["pass"] = report.pass();
  return j.dump(1) + "\n";
}

std::string report_csv(const Report& report) {
  std::set<std::string> keys;
  for (const auto& r : report.records) {
    for (const auto& [k, v] : r.metrics) keys.insert(k);
  }
  std::ostringstream os;
  os << "trial,pass,digest";
  for (const auto& k : keys) os << ',' << k;
  os << ",failure\n";
  for (const auto& r : report.records) {
    os << r.trial << ',' << (r.pass ? 1 : 0) << ',' << r.digest;
    for (const auto& k : keys) {
      auto it = r.metrics.find(k);
      os << ',' << (it == r.metrics.end() ? "" : it->second);
    }
    std::string f = r.failure;
    std::replace(f.begin(), f.end(), ',', ';');
    std::replace(f.begin(), f.end(), '"', '\'');
    os << ",\"" << f << "\"\n";
  }
  return os.str();
}

Report report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    Report rep;
    rep.suite = j.at("suite").get<std::string>();
    const json& c = j.at("config");
    rep.config.suite = c.at("suite").get<std::string>();
    rep.config.p = LorentzParam::parse(c.at("p").get<std::string>());
    rep.config.seed = c.at("seed").get<std::uint64_t>();
    rep.config.trials = c.at("trials").get<std::int64_t>();
    rep.config.max_row = c.at("max_row").get<std::int64_t>();
    rep.config.max_m = c.at("max_m").get<std::int64_t>();
    if (!c.at("epsilon").is_null()) rep.config.epsilon = parse_rational(c.at("epsilon").get<std::string>());
    rep.config.tol = parse_rational(c.at("tol").get<std::string>());
    for (const auto& rj : j.at("records")) {
      TrialRecord r;
      r.trial = rj.at("trial").get<std::uint64_t>();
      r.pass = rj.at("pass").get<bool>();
      r.input = rj.at("input").dump();
      r.digest = rj.at("digest").get<std::string>();
      r.metrics = rj.at("metrics").get<std::map<std::string, std::string>>();
      if (rj.contains("failure")) r.failure = rj.at("failure").get<std::string>();
      rep.records.push_back(std::move(r));
    }
    rep.stats = j.at("stats").get<std::map<std::string, std::string>>();
    return rep;
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("report: ") + e.what());
  }
}

}  // namespace gaugecert

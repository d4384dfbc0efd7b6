#include "gaugecert/generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "gaugecert/lp.hpp"
#include "gaugecert/norms.hpp"

namespace gaugecert {

BSeq::BSeq(std::vector<std::int64_t> m) : m_(std::move(m)) {
  for (std::int64_t v : m_) {
    if (v < 0) throw PreconditionError("BSeq: negative row count");
  }
  if (norm_sq() > 1) throw PreconditionError("BSeq: l2 norm exceeds 1, not in B");
}

std::int64_t BSeq::count(std::int64_t i) const {
  if (i < 1 || i > length()) return 0;
  return m_[static_cast<std::size_t>(i - 1)];
}

Rational BSeq::value(std::int64_t i) const {
  Rational v(count(i), i < 1 ? 1 : i);
  v.canonicalize();
  return v;
}

std::vector<Rational> BSeq::values() const {
  std::vector<Rational> out;
  out.reserve(m_.size());
  for (std::int64_t i = 1; i <= length(); ++i) out.push_back(value(i));
  return out;
}

Rational BSeq::norm_sq() const {
  Rational s = 0;
  for (std::size_t k = 0; k < m_.size(); ++k) {
    if (m_[k] == 0) continue;
    Rational v(m_[k], static_cast<long>(k + 1));
    v.canonicalize();
    s += v * v;
  }
  return s;
}

bool BSeq::is_zero() const {
  return std::all_of(m_.begin(), m_.end(), [](std::int64_t v) { return v == 0; });
}

bool operator==(const BSeq& a, const BSeq& b) {
  std::int64_t n = std::max(a.length(), b.length());
  for (std::int64_t i = 1; i <= n; ++i) {
    if (a.count(i) != b.count(i)) return false;
  }
  return true;
}

BSeq make_b(std::vector<std::int64_t> m) { return BSeq(std::move(m)); }

std::string format_bseq(const BSeq& b) {
  std::string out = "b:";
  for (std::int64_t v : b.counts()) out += " " + std::to_string(v);
  return out;
}

BSeq parse_bseq(const std::string& line) {
  std::string body = line;
  while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.pop_back();
  if (body.rfind("b:", 0) != 0) throw PreconditionError("bseq: expected 'b:' prefix");
  std::istringstream is(body.substr(2));
  std::vector<std::int64_t> m;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw PreconditionError("bseq: bad count '" + tok + "'");
    }
    if (used != tok.size()) throw PreconditionError("bseq: bad count '" + tok + "'");
    m.push_back(v);
  }
  return BSeq(std::move(m));
}

TriVector x_b(const BSeq& b) {
  TriVector x;
  for (std::int64_t i = 1; i <= b.length(); ++i) {
    for (std::int64_t j = 1; j <= b.count(i); ++j) x.set(i, j, 1);
  }
  return x;
}

std::vector<BSeq> enumerate_B(std::int64_t max_row, std::int64_t bound) {
  if (max_row < 1) throw PreconditionError("enumerate_B: max_row must be >= 1");
  if (max_row > bound) {
    throw PreconditionError("enumerate_B: max_row " + std::to_string(max_row) +
                            " exceeds enumeration bound " + std::to_string(bound));
  }
  std::vector<BSeq> out;
  std::vector<std::int64_t> m(static_cast<std::size_t>(max_row), 0);
  // Odometer in lexicographic order; prune on the running norm.
  auto recurse = [&](auto&& self, std::size_t row, const Rational& used) -> void {
    if (row == m.size()) {
      out.emplace_back(m);
      return;
    }
    auto i = static_cast<std::int64_t>(row + 1);
    for (std::int64_t v = 0; v <= i; ++v) {
      Rational b(v, i);
      b.canonicalize();
      Rational next = used + b * b;
      if (next > 1) break;
      m[row] = v;
      self(self, row + 1, next);
    }
    m[row] = 0;
  };
  recurse(recurse, 0, Rational(0));
  return out;
}

Rational UCertificate::cover_value(const TriPoint& p) const {
  Rational s = 0;
  for (std::size_t q = 0; q < generators.size(); ++q) {
    if (generators[q].count(p.i) >= p.j) s += weights[q];
  }
  return s;
}

Rational UCertificate::weight_sum() const {
  Rational s = 0;
  for (const auto& w : weights) s += w;
  return s;
}

bool UCertificate::certifies(const TriVector& x) const {
  if (scale <= 0 || generators.size() != weights.size()) return false;
  for (const auto& w : weights) {
    if (w <= 0) return false;
  }
  if (weight_sum() > 1) return false;
  for (const auto& [p, v] : x.entries()) {
    if (abs(v) > scale * cover_value(p)) return false;
  }
  return true;
}

std::vector<BSeq> covering_candidates(const TriVector& x, std::size_t candidate_cap) {
  std::map<std::int64_t, std::vector<std::int64_t>> options;
  for (const auto& [p, v] : x.entries()) {
    auto& opts = options[p.i];
    if (opts.empty()) opts.push_back(0);
    opts.push_back(p.j);  // entries arrive sorted by column within a row
  }
  std::vector<std::int64_t> rows;
  std::vector<std::vector<std::int64_t>> opts;
  for (auto& [i, o] : options) {
    rows.push_back(i);
    opts.push_back(std::move(o));
  }
  const std::int64_t len = rows.empty() ? 0 : rows.back();

  auto contribution = [&](std::size_t r, std::size_t k) {
    Rational b(opts[r][k], rows[r]);
    b.canonicalize();
    return Rational(b * b);
  };

  std::vector<BSeq> out;
  std::vector<std::size_t> choice(rows.size(), 0);
  std::size_t visited = 0;
  const std::size_t visit_cap = candidate_cap * 64;
  auto recurse = [&](auto&& self, std::size_t r, const Rational& used) -> void {
    if (++visited > visit_cap) {
      throw PreconditionError("covering_candidates: search exceeds candidate cap");
    }
    if (r == rows.size()) {
      // Maximal iff no single row can step to its next option.
      for (std::size_t s = 0; s < rows.size(); ++s) {
        if (choice[s] + 1 < opts[s].size() &&
            used - contribution(s, choice[s]) + contribution(s, choice[s] + 1) <= 1) {
          return;
        }
      }
      std::vector<std::int64_t> m(static_cast<std::size_t>(len), 0);
      for (std::size_t s = 0; s < rows.size(); ++s) {
        m[static_cast<std::size_t>(rows[s] - 1)] = opts[s][choice[s]];
      }
      out.emplace_back(std::move(m));
      if (out.size() > candidate_cap) {
        throw PreconditionError("covering_candidates: more than candidate_cap maximal generators");
      }
      return;
    }
    for (std::size_t k = 0; k < opts[r].size(); ++k) {
      Rational next = used + contribution(r, k);
      if (next > 1) break;
      choice[r] = k;
      self(self, r + 1, next);
    }
    choice[r] = 0;
  };
  recurse(recurse, 0, Rational(0));
  return out;
}

UGauge u_gauge(const TriVector& x, std::size_t candidate_cap) {
  if (x.empty()) return {Rational(0), UCertificate{{}, {}, Rational(1)}};
  std::vector<BSeq> cands = covering_candidates(x, candidate_cap);
  std::vector<TriPoint> points;
  std::vector<Rational> demand;
  for (const auto& [p, v] : x.entries()) {
    points.push_back(p);
    demand.push_back(abs(v));
  }
  lp::Matrix cover(points.size(), cands.size());
  for (std::size_t r = 0; r < points.size(); ++r) {
    for (std::size_t q = 0; q < cands.size(); ++q) {
      cover(r, q) = cands[q].count(points[r].i) >= points[r].j ? 1 : 0;
    }
  }
  lp::CoverSolution sol = lp::min_cover(cover, demand);
  UGauge out;
  out.value = sol.value;
  out.cert.scale = sol.value;
  for (std::size_t q = 0; q < cands.size(); ++q) {
    if (sol.weights[q] > 0) {
      out.cert.generators.push_back(cands[q]);
      out.cert.weights.push_back(sol.weights[q] / sol.value);
    }
  }
  if (!out.cert.certifies(x)) throw InvariantError("u_gauge: optimal cover fails re-check");
  return out;
}

std::optional<UCertificate> u_member(const TriVector& x, const Rational& lambda, std::int64_t max_row) {
  if (lambda <= 0) throw PreconditionError("u_member: lambda must be positive");
  if (max_row < 1 || max_row > kEnumerateBound) {
    throw PreconditionError("u_member: max_row outside enumeration bound");
  }
  if (x.max_row() > max_row) throw PreconditionError("u_member: support outside enumerated rows");
  if (x.empty()) return UCertificate{{}, {}, lambda};
  UGauge g = u_gauge(x);
  if (g.value > lambda) return std::nullopt;
  UCertificate cert = std::move(g.cert);
  for (auto& w : cert.weights) w = w * g.value / lambda;
  cert.scale = lambda;
  return cert;
}

TriVector average_generators(std::span<const BSeq> bs) {
  if (bs.empty()) throw PreconditionError("average_generators: empty list");
  TriVector out;
  for (const auto& b : bs) out += x_b(b);
  out *= Rational(1, static_cast<long>(bs.size()));
  return out;
}

std::int64_t disjointness_degree(std::span<const BSeq> bs) {
  std::map<std::int64_t, std::int64_t> per_row;
  std::int64_t best = 0;
  for (const auto& b : bs) {
    for (std::int64_t i = 1; i <= b.length(); ++i) {
      if (b.count(i) > 0) best = std::max(best, ++per_row[i]);
    }
  }
  return best;
}

namespace {

constexpr long kMaxPresentationSize = 200000;

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

}  // namespace

std::vector<BSeq> small_sup_presentation(const TriVector& x, const UCertificate& cover,
                                         const Rational& epsilon) {
  if (epsilon <= 0) throw PreconditionError("small_sup_presentation: epsilon must be positive");
  if (sup_norm(x) > epsilon) throw PreconditionError("small_sup_presentation: sup|x| > epsilon");
  if (!cover.certifies(x)) throw PreconditionError("small_sup_presentation: cover does not certify x");
  std::vector<Rational> omega;
  Rational total = 0;
  for (const auto& w : cover.weights) {
    omega.push_back(cover.scale * w);
    total += omega.back();
  }
  if (total > 1) throw PreconditionError("small_sup_presentation: cover exceeds U (scale too large)");

  Integer size = epsilon.get_den();
  for (const auto& w : omega) size = lcm(size, Integer(w.get_den()));
  if (size > kMaxPresentationSize) {
    throw PreconditionError("small_sup_presentation: common denominator too large");
  }
  const long m_total = size.get_si();

  std::int64_t len = 0;
  for (const auto& g : cover.generators) len = std::max(len, g.length());
  std::vector<std::vector<std::int64_t>> copies;
  copies.reserve(static_cast<std::size_t>(m_total));
  for (std::size_t q = 0; q < omega.size(); ++q) {
    Rational c = omega[q] * Rational(size);
    long count = c.get_num().get_si();
    std::vector<std::int64_t> m(static_cast<std::size_t>(len), 0);
    for (std::int64_t i = 1; i <= len; ++i) m[static_cast<std::size_t>(i - 1)] = cover.generators[q].count(i);
    for (long k = 0; k < count; ++k) copies.push_back(m);
  }
  while (static_cast<long>(copies.size()) < m_total) {
    copies.emplace_back(static_cast<std::size_t>(len), 0);
  }

  const Rational scale(size);
  std::vector<std::size_t> order(copies.size());
  for (std::int64_t i = 1; i <= len; ++i) {
    const auto row = static_cast<std::size_t>(i - 1);
    // Required copy counts T(c) = ceil(M * max_{c' >= c} |x(i,c')|), non-increasing in c.
    std::vector<std::int64_t> need(static_cast<std::size_t>(i) + 1, 0);
    Rational running = 0;
    for (std::int64_t c = i; c >= 1; --c) {
      Rational v = abs(x.get(i, c));
      if (v > running) running = v;
      need[static_cast<std::size_t>(c)] = ceil(running * scale).get_si();
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return copies[a][row] > copies[b][row];
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      std::int64_t m_new = 0;
      while (m_new < i && need[static_cast<std::size_t>(m_new + 1)] >= static_cast<std::int64_t>(rank + 1)) {
        ++m_new;
      }
      auto& slot = copies[order[rank]][row];
      if (m_new > slot) throw InvariantError("small_sup_presentation: cover does not dominate x");
      slot = m_new;
    }
  }

  std::vector<BSeq> out;
  out.reserve(copies.size());
  for (auto& m : copies) out.emplace_back(std::move(m));
  return out;
}

}  // namespace gaugecert

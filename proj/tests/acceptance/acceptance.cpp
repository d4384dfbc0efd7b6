// Acceptance run: one PASS/FAIL line per criterion. Each criterion runs the
// library's sweep suite and then re-checks every record from its serialized
// input with the stand-alone checker.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "checker.hpp"
#include "gaugecert/random.hpp"
#include "gaugecert/report.hpp"
#include "gaugecert/sweep.hpp"
#include "json.hpp"

using namespace gaugecert;
using nlohmann::json;
using check::Q;
using check::Vec;

namespace {

const LorentzParam P32(3, 2);
const Q kTol(1, 1000);

struct Outcome {
  std::int64_t checked = 0;
  std::vector<std::string> problems;
  std::string note;
  void expect(bool ok, std::uint64_t trial, const std::string& what) {
    if (!ok && problems.size() < 20) problems.push_back("trial " + std::to_string(trial) + ": " + what);
    if (!ok && problems.size() == 20) problems.push_back("...");
  }
};

std::map<std::string, std::string> g_reports;  // suite -> report bytes, for determinism

Q rq(const json& j) { return parse_rational(j.get<std::string>()); }

std::vector<Q> rq_list(const json& j) {
  std::vector<Q> out;
  for (const auto& e : j) out.push_back(rq(e));
  return out;
}

std::vector<BSeq> gens(const json& j) {
  std::vector<BSeq> out;
  for (const auto& e : j) out.push_back(parse_bseq(e.get<std::string>()));
  return out;
}

TriVector tri(const json& j) {
  TriVector x;
  for (const auto& e : j) x.set(e[0].get<std::int64_t>(), e[1].get<std::int64_t>(), rq(e[2]));
  return x;
}

std::vector<ARepresentative> reps_from(const json& reps) {
  json wrap{{"scale", "1"}, {"weights", json::array()}, {"reps", reps}};
  for (std::size_t i = 0; i < reps.size(); ++i) wrap["weights"].push_back("1");
  return vcertificate_from_json(wrap.dump()).reps;
}

Report run(const std::string& suite, std::int64_t trials, Outcome& o) {
  SweepConfig c;
  c.suite = suite;
  c.trials = trials;
  c.p = P32;
  c.seed = 1;
  c.tol = kTol;
  Report r = run_suite(c);
  g_reports[suite] = report_json(r);
  o.expect(static_cast<std::int64_t>(r.records.size()) == trials, 0, "wrong record count");
  for (const auto* f : r.failures()) o.expect(false, f->trial, "suite failure: " + f->failure);
  return r;
}

template <class F>
void each_record(const Report& r, Outcome& o, F&& f) {
  for (const auto& rec : r.records) {
    try {
      f(rec, json::parse(rec.input));
      ++o.checked;
    } catch (const std::exception& e) {
      o.expect(false, rec.trial, std::string("exception: ") + e.what());
    }
  }
}

bool brute_has_subset(const std::vector<Q>& a) {
  for (std::size_t mask = 1; mask < (std::size_t{1} << a.size()); ++mask) {
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (mask >> i & 1) s += a[i];
    if (s >= Q(1, 2) && s <= 1) return true;
  }
  return false;
}

bool subset_ok(const std::vector<Q>& a, const std::vector<std::size_t>& s) {
  Q sum = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] >= a.size() || (k > 0 && s[k] <= s[k - 1])) return false;
    sum += a[s[k]];
  }
  return !s.empty() && sum >= Q(1, 2) && sum <= 1;
}

// ---------------------------------------------------------------------------

Outcome criterion_select() {
  Outcome o;
  const Report r = run("select", 1000, o);
  std::int64_t brute = 0;
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    const auto a = rq_list(in["a"]);
    o.expect(a.size() >= 2 && a.size() <= 64, rec.trial, "length outside [2, 64]");
    const auto s = select_subset(a);
    o.expect(subset_ok(a, s), rec.trial, "selected sum outside [1/2, 1]");
    if (a.size() <= 12) {
      ++brute;
      o.expect(brute_has_subset(a), rec.trial, "brute force finds no valid subset");
    }
  });
  // exhaustive grid: every vector over {0, 1/4, ..., 1} of length <= 6 with sum > 1
  std::int64_t grid = 0;
  for (std::size_t len = 2; len <= 6; ++len) {
    std::vector<int> d(len, 0);
    while (true) {
      std::vector<Q> a;
      Q sum = 0;
      for (int v : d) {
        a.push_back(Q(v, 4));
        a.back().canonicalize();
        sum += a.back();
      }
      if (sum > 1) {
        ++grid;
        const auto s = select_subset(a);
        o.expect(subset_ok(a, s) && brute_has_subset(a), 0, "grid vector fails");
      }
      std::size_t i = 0;
      while (i < len && d[i] == 4) d[i++] = 0;
      if (i == len) break;
      ++d[i];
    }
  }
  o.note = std::to_string(brute) + " random instances with length <= 12 brute-forced, " + std::to_string(grid) +
           " grid vectors";
  return o;
}

Outcome criterion_partition() {
  Outcome o;
  const Report r = run("partition", 500, o);
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& row : in["rows"]) rows.push_back(rq_list(row));
    const UnitMatrix a = UnitMatrix::from_rows(rows);
    o.expect(a.rows() <= 20 && a.cols() <= 20, rec.trial, "dimensions above 20");
    Q total = 0;
    for (const auto& row : rows)
      for (const auto& v : row) {
        o.expect(v >= 0 && v <= 1, rec.trial, "entry outside [0,1]");
        total += v;
      }
    const PartitionResult res = partition_matrix(a, total);
    std::map<std::pair<std::int64_t, std::int64_t>, int> seen;
    for (const auto& part : res.parts) {
      Q s = 0;
      std::set<std::int64_t> cols;
      for (const auto& c : part) {
        o.expect(c.row >= 1 && c.row <= a.rows() && c.col >= 1 && c.col <= a.cols(), rec.trial, "cell out of range");
        s += rows[c.row - 1][c.col - 1];
        o.expect(cols.insert(c.col).second, rec.trial, "two cells of one column in a part");
        ++seen[{c.row, c.col}];
      }
      o.expect(s <= 1, rec.trial, "part sum above 1");
    }
    for (std::int64_t i = 1; i <= a.rows(); ++i)
      for (std::int64_t j = 1; j <= a.cols(); ++j) {
        const int want = rows[i - 1][j - 1] != 0 ? 1 : 0;
        const int got = seen.count({i, j}) ? seen[{i, j}] : 0;
        o.expect(got == want || (want == 0 && got <= 1), rec.trial, "not an exact cover");
      }
    o.expect(Q(static_cast<long>(res.parts.size())) <= 2 * total + Q(static_cast<long>(a.rows())), rec.trial,
             "more than 2M + k parts");
    o.expect(total == 0 ? res.reductions == 0 : Q(static_cast<long>(res.reductions)) < 2 * total, rec.trial,
             "reductions not below 2M");
  });
  return o;
}

Outcome criterion_disjoint() {
  Outcome o;
  const Report r = run("disjoint", 1000, o);
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    const auto k = in["k"].get<std::int64_t>();
    std::vector<std::vector<Q>> fam;
    for (const auto& x : in["family"]) fam.push_back(rq_list(x));
    const auto n = static_cast<std::int64_t>(fam.size());
    o.expect(k >= 1 && k <= 5 && n >= 1 && n <= 50, rec.trial, "k or n out of range");
    std::size_t len = 0;
    for (const auto& x : fam) len = std::max(len, x.size());
    std::vector<Q> sum(len, 0);
    for (const auto& x : fam) {
      Q ns = 0;
      for (std::size_t c = 0; c < x.size(); ++c) {
        ns += x[c] * x[c];
        sum[c] += x[c];
      }
      o.expect(ns <= 1, rec.trial, "member outside the unit ball");
    }
    for (std::size_t c = 0; c < len; ++c) {
      std::int64_t nz = 0;
      for (const auto& x : fam) nz += c < x.size() && x[c] != 0;
      o.expect(nz <= k, rec.trial, "not k-disjoint");
    }
    Q ns = 0;
    for (const auto& v : sum) ns += v * v;
    o.expect(ns <= Q(static_cast<long>(k * n)), rec.trial, "||sum||^2 > k n");
  });
  return o;
}

Outcome criterion_smallrho() {
  Outcome o;
  const Report r = run("smallrho", 500, o);
  std::set<std::string> eps_seen;
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    const Q eps = rq(in["epsilon"]);
    eps_seen.insert(eps.get_str());
    o.expect(eps == Q(1, 4) || eps == Q(1, 16) || eps == Q(1, 64), rec.trial, "epsilon outside the set");
    const auto bs = gens(in["generators"]);
    Vec total;
    for (const auto& b : bs) {
      o.expect(check::in_B(b.counts()), rec.trial, "generator outside B");
      total = check::add(total, check::ones_prefix(b.counts()));
    }
    const Q M(static_cast<long>(bs.size()));
    o.expect(check::sup_abs(total) <= eps * M, rec.trial, "sup above epsilon");
    o.expect(check::rho2(total) <= eps * M * M, rec.trial, "rho^2 > epsilon");
  });
  o.note = "epsilons " + std::to_string(eps_seen.size());
  return o;
}

Outcome criterion_blocks() {
  Outcome o;
  const Report r = run("blocks", 500, o);
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    const auto a_sq = rq_list(in["a_sq"]);
    const auto br = in["breakpoints"].get<std::vector<std::int64_t>>();
    o.expect(check::block_conditions(a_sq, br, 3, 2), rec.trial, "block conditions fail");
    o.expect(check::weak_le(a_sq, 4, 2, 3, 2), rec.trial, "weak-l^p norm above 2");
  });
  return o;
}

Outcome criterion_mainlemma() {
  Outcome o;
  const Report r = run("mainlemma", 100, o);
  std::int64_t max_m = 0, max_row = 0;
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    const Q eps = rq(in["epsilon"]);
    o.expect(eps == Q(1, 4) || eps == Q(1, 16), rec.trial, "epsilon outside the set");
    const auto bs = gens(in["generators"]);
    max_m = std::max<std::int64_t>(max_m, static_cast<std::int64_t>(bs.size()));
    for (const auto& b : bs) max_row = std::max(max_row, b.length());
    o.expect(bs.size() <= 200 && max_row <= 50, rec.trial, "instance above the size caps");
    const DecompositionCertificate produced = main_decompose(bs, eps, P32);
    // verify the serialized form, not the in-memory object
    const DecompositionCertificate cert = decomposition_from_json(to_json(produced));
    o.expect(digest(cert) == rec.digest, rec.trial, "certificate digest differs from the report");
    for (const auto& p : check::decomposition_problems(cert)) o.expect(false, rec.trial, p);
    if (rec.trial == 0) {
      // the checker must reject doctored copies
      auto a = cert;
      a.scale /= 2;
      auto b = cert;
      if (!b.blocks.front().pieces.empty()) b.blocks.front().pieces.pop_back();
      else b.scale = 0;
      auto c = cert;
      c.blocks.front().rho_sq *= 2;
      auto d = cert;
      d.eta_used /= 4;
      for (const auto* bad : {&a, &b, &c, &d})
        o.expect(!check::decomposition_problems(*bad).empty(), rec.trial, "checker accepted a doctored certificate");
    }
  });
  o.note = "max M " + std::to_string(max_m) + ", max row " + std::to_string(max_row);
  return o;
}

Outcome criterion_quotient() {
  Outcome o;
  const Report r = run("quotient", 1000, o);
  const ConstantC& cc = default_constant_C(P32);
  const check::CRef ref = check::c_reference(3, 2);
  const long double c_ref = std::sqrt(ref.c_sq);
  o.expect(cc.c.hi - cc.c.lo <= kTol, 0, "C enclosure wider than 1e-3");
  o.expect(static_cast<long double>(to_double(cc.c_sq.lo)) <= ref.c_sq + ref.radius, 0, "C^2 lower end above reference");
  o.expect(static_cast<long double>(to_double(cc.c_sq.hi)) >= ref.c_sq - ref.radius, 0, "C^2 upper end below reference");
  o.expect(std::fabs(c_ref - 1.8976L) < 1e-4L, 0, "reference C not near 1.8976");
  Q min_pairing = 1;
  std::int64_t branch2 = 0;
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    const auto b = rq_list(in["b"]);
    Q s = 0, head = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      s += b[i] * b[i];
      if (i < 4) head += b[i] * b[i];
    }
    o.expect(s == 1, rec.trial, "b not exactly unit");
    const QuotientWitness w = quotient_witness(b);
    o.expect(w.branch == (head >= Q(5, 9) ? 1 : 2), rec.trial, "wrong branch");
    branch2 += w.branch == 2;
    const Vec y = check::from_tri(w.y);
    // |y| must be x_d for some d in B (so y lies in U and hence in V at scale 1)
    std::map<std::int64_t, std::int64_t> counts;
    bool ones = true;
    for (const auto& [k, v] : y) {
      ones = ones && check::qabs(v) == 1;
      counts[k.first] = std::max(counts[k.first], k.second);
    }
    std::vector<std::int64_t> m(static_cast<std::size_t>(counts.empty() ? 0 : counts.rbegin()->first), 0);
    for (const auto& [i, c] : counts) m[static_cast<std::size_t>(i - 1)] = c;
    Vec abs_y;
    for (const auto& [k, v] : y) abs_y[k] = check::qabs(v);
    o.expect(ones && check::in_B(m) && check::same(abs_y, check::ones_prefix(m)), rec.trial, "|y| is not some x_d");
    const Q pair = check::pairing(y, b);
    o.expect(pair == w.pairing, rec.trial, "stored pairing differs");
    o.expect(pair >= Q(2, 9), rec.trial, "pairing below 2/9");
    min_pairing = std::min(min_pairing, pair);

    const TriVector v = tri(in["v"]);
    const VCertificate vc = vcertificate_from_json(in["v_cert"].dump());
    const std::string bad = check::v_cert_problem(vc, check::from_tri(v), 3, 2);
    o.expect(bad.empty(), rec.trial, "v certificate: " + bad);
    o.expect(vc.scale <= 1, rec.trial, "v not at scale 1");
    const auto b2 = rq_list(in["b2"]);
    Q s2 = 0;
    for (const auto& x : b2) s2 += x * x;
    o.expect(s2 == 1, rec.trial, "b2 not exactly unit");
    o.expect(check::qabs(check::pairing(check::from_tri(v), b2)) <= cc.c.hi, rec.trial, "z_pair(v, b) > C_hi");
    o.expect(check::rho2(check::from_tri(v)) <= cc.c.hi * cc.c.hi, rec.trial, "rho(v)^2 > C_hi^2");
  });
  std::ostringstream os;
  os << "min pairing " << to_double(min_pairing) << ", branch-2 cases " << branch2 << ", C in ["
     << to_double(cc.c.lo) << ", " << to_double(cc.c.hi) << "]";
  o.note = os.str();
  return o;
}

bool unit_xb(const Vec& x) {
  std::map<std::int64_t, std::int64_t> counts;
  for (const auto& [k, v] : x) {
    if (check::qabs(v) != 1) return false;
    counts[k.first] = std::max(counts[k.first], k.second);
  }
  if (counts.empty()) return false;
  std::vector<std::int64_t> m(static_cast<std::size_t>(counts.rbegin()->first), 0);
  Q s = 0;
  for (const auto& [i, c] : counts) {
    m[static_cast<std::size_t>(i - 1)] = c;
    s += check::frac(c * c, i * i);
  }
  Vec a;
  for (const auto& [k, v] : x) a[k] = 1;
  return check::same(a, check::ones_prefix(m)) && s == 1;
}

Outcome criterion_sandwich() {
  Outcome o;
  const Report r = run("sandwich", 200, o);
  const Q c_hi = default_constant_C(P32).c.hi;
  std::int64_t units = 0;
  Q widest = 0;
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    const TriVector x = tri(in["x"]);
    const Vec xv = check::from_tri(x);
    o.expect(x.empty() || x.max_row() <= 3, rec.trial, "support beyond row 3");
    GaugeConfig gc;
    gc.p = P32;
    gc.seed = splitmix64(1 ^ rec.trial);
    const LowerBound lo = tau_lower(x, gc);
    const UpperBound up = tau_upper(x, gc);
    const GaugeInterval g = tau_micro_oracle(x, kTol, gc);
    o.expect(rec.metrics.at("lower") == to_string(lo.lo) && rec.metrics.at("upper") == to_string(up.hi) &&
                 rec.metrics.at("oracle_lo") == to_string(g.lo) && rec.metrics.at("oracle_hi") == to_string(g.hi),
             rec.trial, "recomputed bounds differ from the report");
    o.expect(lo.lo <= g.lo && g.lo <= g.hi && g.hi <= up.hi, rec.trial, "sandwich order violated");
    o.expect(g.hi - g.lo <= kTol, rec.trial, "oracle width above 1e-3");
    widest = std::max(widest, Q(g.hi - g.lo));
    // upper ends: certificates re-checked at their scales
    VCertificate oc = g.upper;
    const std::string bad_o = check::v_cert_problem(oc, xv, 3, 2);
    o.expect(xv.empty() || (bad_o.empty() && oc.scale <= g.hi), rec.trial, "oracle certificate: " + bad_o);
    const std::string bad_u = check::v_cert_problem(up.cert, xv, 3, 2);
    o.expect(xv.empty() || (bad_u.empty() && up.cert.scale <= up.hi), rec.trial, "upper certificate: " + bad_u);
    // lower end: the primal witnesses are re-evaluated directly
    const LowerWitness& w = lo.witness;
    switch (w.kind) {
      case LowerKind::Zero:
        o.expect(lo.lo == 0, rec.trial, "zero witness with positive bound");
        break;
      case LowerKind::SupNorm:
        o.expect(lo.lo <= check::qabs(x.get(w.point)), rec.trial, "sup-norm witness too large");
        break;
      case LowerKind::Rho:
        o.expect(lo.lo * lo.lo * c_hi * c_hi <= check::rho2(xv), rec.trial, "rho witness too large");
        break;
      case LowerKind::Pairing: {
        Q s = 0;
        for (const auto& v : w.b) s += v * v;
        o.expect(s == 1 && lo.lo * c_hi <= check::qabs(check::pairing(xv, w.b)), rec.trial,
                 "pairing witness too large");
        break;
      }
      case LowerKind::Dual:
        o.expect(false, rec.trial, "tau_lower returned a dual witness");
        break;
    }
    if (unit_xb(xv)) {
      ++units;
      o.expect(g.lo >= 1 / c_hi - kTol && g.hi <= 1, rec.trial, "unit x_b interval outside [1/C_hi - tol, 1]");
    }
  });
  o.note = std::to_string(units) + " unit x_b instances, widest interval " + std::to_string(to_double(widest));
  return o;
}

Outcome criterion_split() {
  Outcome o;
  const Report r = run("split", 100, o);
  std::int64_t nonzero_v = 0;
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    const Q eps = rq(in["epsilon"]);
    const auto weights = rq_list(in["weights"]);
    const auto reps = reps_from(in["reps"]);
    if (reps.empty()) return;
    Vec y;
    Q wsum = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const std::string bad = check::a_rep_problem(reps[i], 3, 2);
      o.expect(bad.empty(), rec.trial, "input rep: " + bad);
      y = check::add(y, check::a_rep_sum(reps[i]), weights[i]);
      wsum += weights[i];
    }
    o.expect(wsum <= 1, rec.trial, "weights above 1");
    o.expect(check::sup_abs(y) <= eps, rec.trial, "sup of y above epsilon");

    const SplitResult s = split_v_element(weights, reps, eps, P32);
    o.expect(digest(s) == rec.digest, rec.trial, "split digest differs from the report");
    const Vec u = check::from_tri(s.u), v = check::from_tri(s.v);
    o.expect(check::same(check::add(u, v), y), rec.trial, "u + v != y");
    Vec u_rebuilt;
    const Q eps_den = check::qpow(eps, 2);  // eps^{den}, den = 2
    for (std::size_t i = 0; i < s.tails.size(); ++i) {
      const std::string bad = check::a_rep_problem(s.tails[i], 3, 2);
      o.expect(bad.empty(), rec.trial, "tail: " + bad);
      // rho^2 <= eps^{1/4p} = eps^{den/(4 num)}  <=>  (rho^2)^{4 num} <= eps^{den}
      for (const auto& r2 : s.tails[i].rho_sq)
        o.expect(check::qpow(r2, 12) <= eps_den, rec.trial, "tail piece not eps^{1/8p}-small");
      u_rebuilt = check::add(u_rebuilt, check::a_rep_sum(s.tails[i]), weights[i]);
    }
    o.expect(check::same(u_rebuilt, u), rec.trial, "u is not the weighted sum of the tails");

    Vec v_rebuilt;
    Q bound_sum = 0;
    for (std::size_t l = 0; l < s.v_parts.size(); ++l) {
      const Vec vl = check::from_tri(s.v_parts[l]);
      v_rebuilt = check::add(v_rebuilt, vl);
      const Q& b = s.v_bounds[l];
      bound_sum += b;
      if (vl.empty()) continue;
      ++nonzero_v;
      o.expect(static_cast<bool>(s.v_certs[l]), rec.trial, "v part without certificate");
      if (!s.v_certs[l]) continue;
      const auto& dc = *s.v_certs[l];
      for (const auto& p : check::decomposition_problems(dc)) o.expect(false, rec.trial, "v part: " + p);
      Vec avg;
      for (const auto& g : dc.generators) avg = check::add(avg, check::ones_prefix(g.counts()));
      bool dominated = true;
      for (const auto& [k, val] : vl) {
        auto it = avg.find(k);
        dominated = dominated && it != avg.end() &&
                    check::qabs(val) * Q(static_cast<long>(dc.generators.size())) <= it->second;
      }
      o.expect(dominated, rec.trial, "v part not dominated by its presentation");
      // tau(v_l) <= b: by the certificate, or b = 1 with 0 <= v_l <= y in co(A)
      bool below_y = true;
      for (const auto& [k, val] : vl) {
        auto it = y.find(k);
        below_y = below_y && val >= 0 && it != y.end() && val <= it->second;
      }
      o.expect(b >= dc.scale || (b == 1 && below_y), rec.trial, "v part bound not certified");
    }
    o.expect(check::same(v_rebuilt, v), rec.trial, "v is not the sum of its parts");
    o.expect(bound_sum == s.tau_v_bound, rec.trial, "tau_v_bound differs from the part bounds");
    o.expect(check::qpow(s.tau_v_bound, 8) <= 390625 * eps, rec.trial, "tau_v_bound^8 > 5^8 eps");
  });
  o.note = std::to_string(nonzero_v) + " non-zero v parts certified";
  return o;
}

Outcome criterion_merge() {
  Outcome o;
  const Report r = run("merge", 50, o);
  each_record(r, o, [&](const TrialRecord& rec, const json& in) {
    const auto reps = reps_from(in["reps"]);
    o.expect(reps.size() == 50, rec.trial, "family length is not 50");
    std::set<std::int64_t> rows;
    for (const auto& rep : reps) {
      const std::string bad = check::a_rep_problem(rep, 3, 2);
      o.expect(bad.empty(), rec.trial, "input rep: " + bad);
      for (const auto& [k, v] : check::a_rep_sum(rep)) rows.insert(k.first);
    }
    const MergeResult m = merge_blocks(reps, P32);
    o.expect(m.selected.size() == reps.size(), rec.trial, "not every representative was merged");
    // every prefix: half of the concatenation is an A-representative
    ARepresentative half;
    std::vector<std::int64_t> br{0};
    std::vector<Q> rho_all;
    for (std::size_t k = 0; k < reps.size(); ++k) {
      for (std::size_t l = 0; l < reps[k].length(); ++l) {
        UCertificate c = reps[k].certs[l];
        for (auto& w : c.weights) w /= 2;
        half.pieces.push_back(reps[k].pieces[l] * Rational(1, 2));
        half.certs.push_back(c);
        half.rho_sq.push_back(reps[k].rho_sq[l] / 4);
        rho_all.push_back(reps[k].rho_sq[l]);
      }
      if (reps[k].length() > 0) br.push_back(static_cast<std::int64_t>(rho_all.size()));
      const std::string bad = check::a_rep_problem(half, 3, 2);
      o.expect(bad.empty(), rec.trial, "prefix " + std::to_string(k + 1) + " half-sum: " + bad);
      o.expect(check::weak_le(rho_all, 4, 2, 3, 2), rec.trial, "prefix rho vector above 2");
    }
    o.expect(check::block_conditions(rho_all, br, 3, 2), rec.trial, "block conditions fail");
    o.expect(m.half_sum.length() == half.length(), rec.trial, "merged half-sum length differs");
  });
  return o;
}

Outcome criterion_determinism() {
  Outcome o;
  const std::map<std::string, std::int64_t> trials{{"select", 1000}, {"partition", 500}, {"disjoint", 1000},
                                                   {"smallrho", 500},  {"blocks", 500},    {"mainlemma", 100},
                                                   {"quotient", 1000}, {"sandwich", 200}, {"split", 100},
                                                   {"merge", 50}};
  for (const auto& [suite, n] : trials) {
    SweepConfig c;
    c.suite = suite;
    c.trials = n;
    c.p = P32;
    c.seed = 1;
    c.tol = kTol;
    const std::string again = report_json(run_suite(c));
    auto it = g_reports.find(suite);
    o.expect(it != g_reports.end() && it->second == again, 0, suite + ": rerun differs");
    // the config echoed in the report reproduces it too
    o.expect(report_json(run_suite(report_from_json(again).config)) == again, 0, suite + ": config echo differs");
    ++o.checked;
  }
  o.note = "10 suites rerun twice each";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "subset selection", criterion_select},
      {2, "matrix partition", criterion_partition},
      {3, "k-disjoint l2 bound", criterion_disjoint},
      {4, "rho of small-sup averages", criterion_smallrho},
      {5, "block sequences", criterion_blocks},
      {6, "small-sup decomposition", criterion_mainlemma},
      {7, "quotient functional", criterion_quotient},
      {8, "gauge sandwich", criterion_sandwich},
      {9, "V-element split", criterion_split},
      {10, "strongly decreasing merge", criterion_merge},
      {11, "determinism", criterion_determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.problems.empty();
    failed += !pass;
    std::printf("%s %2d %s: %lld records re-checked%s%s (%.1fs)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                static_cast<long long>(o.checked), o.note.empty() ? "" : "; ", o.note.c_str(), secs);
    for (const auto& p : o.problems) std::printf("     %s\n", p.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}

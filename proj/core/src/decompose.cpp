#include "gaugecert/decompose.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace gaugecert {

// ---------------------------------------------------------------------------
// UnitMatrix

UnitMatrix::UnitMatrix(std::int64_t k, std::int64_t l) : k_(k), l_(l) {
  if (k < 0 || l < 0) throw PreconditionError("UnitMatrix: negative dimension");
  a_.assign(static_cast<std::size_t>(k * l), Rational(0));
}

UnitMatrix UnitMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  auto k = static_cast<std::int64_t>(rows.size());
  auto l = rows.empty() ? std::int64_t{0} : static_cast<std::int64_t>(rows.front().size());
  UnitMatrix out(k, l);
  for (std::int64_t i = 1; i <= k; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i - 1)];
    if (static_cast<std::int64_t>(row.size()) != l) throw PreconditionError("UnitMatrix: ragged rows");
    for (std::int64_t j = 1; j <= l; ++j) out.set(i, j, row[static_cast<std::size_t>(j - 1)]);
  }
  return out;
}

const Rational& UnitMatrix::at(std::int64_t i, std::int64_t j) const {
  return a_[static_cast<std::size_t>((i - 1) * l_ + (j - 1))];
}

void UnitMatrix::set(std::int64_t i, std::int64_t j, const Rational& v) {
  if (i < 1 || i > k_ || j < 1 || j > l_) throw PreconditionError("UnitMatrix: index out of range");
  if (v < 0 || v > 1) throw PreconditionError("UnitMatrix: entry outside [0,1]");
  a_[static_cast<std::size_t>((i - 1) * l_ + (j - 1))] = v;
}

Rational UnitMatrix::total() const {
  Rational s = 0;
  for (const auto& v : a_) s += v;
  return s;
}

Rational UnitMatrix::column_mass(std::int64_t j) const {
  Rational s = 0;
  for (std::int64_t i = 1; i <= k_; ++i) s += at(i, j);
  return s;
}

std::int64_t UnitMatrix::top(std::int64_t j) const {
  for (std::int64_t i = 1; i <= k_; ++i) {
    if (at(i, j) != 0) return i;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Subset selection and matrix partition

std::vector<std::size_t> select_subset(std::span<const Rational> a) {
  Rational total = 0;
  for (const auto& v : a) {
    if (v < 0 || v > 1) throw PreconditionError("select_subset: entries must lie in [0,1]");
    total += v;
  }
  if (total <= 1) throw PreconditionError("select_subset: sum must exceed 1");

  const Rational half(1, 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= half) return {i};
  }
  // Every term is < 1/2, so the running sum first reaching 1/2 stays below 1.
  std::vector<std::size_t> out;
  Rational running = 0;
  for (std::size_t i = 0; i < a.size() && running < half; ++i) {
    if (a[i] == 0) continue;
    out.push_back(i);
    running += a[i];
  }
  return out;
}

std::optional<ReduceStep> reduce_step(const UnitMatrix& a) {
  std::vector<Rational> tops;
  std::vector<Cell> cells;
  Rational sum = 0;
  for (std::int64_t j = 1; j <= a.cols(); ++j) {
    std::int64_t s = a.top(j);
    if (s == 0) continue;
    tops.push_back(a.at(s, j));
    cells.push_back({s, j});
    sum += tops.back();
  }
  if (sum <= 1) return std::nullopt;
  ReduceStep step{{}, a};
  for (std::size_t idx : select_subset(tops)) {
    step.selected.push_back(cells[idx]);
    step.reduced.set(cells[idx].row, cells[idx].col, 0);
  }
  return step;
}

PartitionResult partition_matrix(const UnitMatrix& a, const Rational& bound) {
  if (a.total() > bound) throw PreconditionError("partition_matrix: Sigma(a) exceeds the bound");
  const std::int64_t k = a.rows();
  const std::int64_t l = a.cols();

  // Column-wise non-increasing order; order[j][i] is the original row at sorted rank i.
  std::vector<std::vector<std::int64_t>> order(static_cast<std::size_t>(l));
  for (std::int64_t j = 1; j <= l; ++j) {
    auto& ord = order[static_cast<std::size_t>(j - 1)];
    ord.resize(static_cast<std::size_t>(k));
    std::iota(ord.begin(), ord.end(), std::int64_t{1});
    std::stable_sort(ord.begin(), ord.end(),
                     [&](std::int64_t r1, std::int64_t r2) { return a.at(r1, j) > a.at(r2, j); });
  }
  auto sorted_value = [&](std::int64_t rank, std::int64_t j) -> const Rational& {
    return a.at(order[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(rank - 1)], j);
  };

  // Reductions only ever remove the current top of a column, so a pointer per
  // column tracks s_j of the sorted matrix.
  std::vector<std::int64_t> top(static_cast<std::size_t>(l), 1);
  auto current_top = [&](std::int64_t j) -> std::int64_t {
    std::int64_t t = top[static_cast<std::size_t>(j - 1)];
    return (t <= k && sorted_value(t, j) != 0) ? t : 0;
  };
  std::vector<std::vector<bool>> removed(static_cast<std::size_t>(k + 1),
                                         std::vector<bool>(static_cast<std::size_t>(l + 1), false));

  PartitionResult result;
  result.bound = bound;
  result.k = k;
  std::vector<Rational> tops;
  std::vector<std::int64_t> cols;
  for (;;) {
    tops.clear();
    cols.clear();
    Rational sum = 0;
    for (std::int64_t j = 1; j <= l; ++j) {
      std::int64_t s = current_top(j);
      if (s == 0) continue;
      tops.push_back(sorted_value(s, j));
      cols.push_back(j);
      sum += tops.back();
    }
    if (sum <= 1) break;
    std::vector<Cell> part;
    for (std::size_t idx : select_subset(tops)) {
      std::int64_t j = cols[idx];
      std::int64_t rank = top[static_cast<std::size_t>(j - 1)];
      removed[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)] = true;
      ++top[static_cast<std::size_t>(j - 1)];
      part.push_back({order[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(rank - 1)], j});
    }
    std::sort(part.begin(), part.end());
    result.parts.push_back(std::move(part));
    ++result.reductions;
  }
  for (std::int64_t rank = 1; rank <= k; ++rank) {
    std::vector<Cell> part;
    for (std::int64_t j = 1; j <= l; ++j) {
      if (!removed[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)]) {
        part.push_back({order[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(rank - 1)], j});
      }
    }
    std::sort(part.begin(), part.end());
    result.parts.push_back(std::move(part));
  }
  return result;
}

bool check_partition(const UnitMatrix& a, const PartitionResult& result) {
  std::set<Cell> seen;
  for (const auto& part : result.parts) {
    Rational sum = 0;
    std::set<std::int64_t> part_cols;
    for (const Cell& c : part) {
      if (c.row < 1 || c.row > a.rows() || c.col < 1 || c.col > a.cols()) return false;
      if (!seen.insert(c).second) return false;
      if (!part_cols.insert(c.col).second) return false;
      sum += a.at(c.row, c.col);
    }
    if (sum > 1) return false;
  }
  if (static_cast<std::int64_t>(seen.size()) != a.rows() * a.cols()) return false;
  if (a.total() > result.bound) return false;
  const auto n = static_cast<std::int64_t>(result.parts.size());
  if (Rational(n) > 2 * result.bound + Rational(a.rows())) return false;
  if (result.reductions > 0 && !(Rational(result.reductions) < 2 * result.bound)) return false;
  return n == result.reductions + a.rows();
}

std::vector<std::int64_t> column_blocking(const UnitMatrix& a, const Rational& eta_m) {
  if (eta_m <= 0) throw PreconditionError("column_blocking: threshold must be positive");
  std::vector<std::int64_t> breaks{0};
  Rational acc = 0;
  for (std::int64_t j = 1; j <= a.cols(); ++j) {
    acc += a.column_mass(j);
    if (acc > eta_m) {
      breaks.push_back(j);
      acc = 0;
    }
  }
  if (breaks.back() != a.cols()) breaks.push_back(a.cols());
  return breaks;
}

// ---------------------------------------------------------------------------
// Main decomposition

Interval eta_enclosure(const Rational& epsilon, const LorentzParam& p, unsigned long bits) {
  if (epsilon <= 0 || epsilon >= 1) throw PreconditionError("eta: need 0 < epsilon < 1");
  Interval x = rational_power_enclosure(epsilon, -p.num(), 4UL * static_cast<unsigned long>(p.den()), bits);
  return {1 / (2 * x.hi - 1), 1 / (2 * x.lo - 1)};
}

namespace {

std::int64_t support_length(std::span<const BSeq> bs) {
  std::int64_t l = 0;
  for (const auto& b : bs) {
    for (std::int64_t i = b.length(); i > l; --i) {
      if (b.count(i) > 0) {
        l = i;
        break;
      }
    }
  }
  return l;
}

// eta_used >= (2 eps^{-p/4} - 1)^{-1} exactly.
bool eta_dominates(const Rational& eta_used, const Rational& epsilon, const LorentzParam& p) {
  if (eta_used <= 0) return false;
  Rational lhs = pow((1 / eta_used + 1) / 2, 4UL * static_cast<unsigned long>(p.den()));
  Rational rhs = pow(1 / epsilon, static_cast<unsigned long>(p.num()));
  return lhs <= rhs;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

}  // namespace

TriVector DecompositionCertificate::block_element(std::size_t m_index) const {
  TriVector y;
  for (const auto& d : blocks.at(m_index).pieces) y += x_b(d);
  y *= Rational(1, static_cast<long>(m));
  return y;
}

DecompositionCertificate main_decompose(std::span<const BSeq> bs, const Rational& epsilon,
                                        const LorentzParam& p) {
  if (bs.empty()) throw PreconditionError("main_decompose: empty generator list");
  if (epsilon <= 0 || epsilon >= 1) throw PreconditionError("main_decompose: need 0 < epsilon < 1");
  if (sup_norm(average_generators(bs)) > epsilon) {
    throw PreconditionError("main_decompose: sup norm of the average exceeds epsilon");
  }

  DecompositionCertificate cert;
  cert.generators.assign(bs.begin(), bs.end());
  cert.epsilon = epsilon;
  cert.p = p;
  cert.m = static_cast<std::int64_t>(bs.size());
  cert.k = floor(epsilon * cert.m).get_si();
  const Rational m_rat(cert.m);
  const std::int64_t l = support_length(bs);

  // a_{i,j}: squares of column j's non-zero b-values, decreasing, ties by generator index.
  UnitMatrix a(cert.k, l);
  std::vector<std::size_t> provenance(static_cast<std::size_t>(cert.k * l), 0);
  for (std::int64_t j = 1; j <= l; ++j) {
    std::vector<std::pair<Rational, std::size_t>> col;
    for (std::size_t q = 0; q < bs.size(); ++q) {
      if (bs[q].count(j) > 0) {
        Rational b = bs[q].value(j);
        col.emplace_back(b * b, q);
      }
    }
    if (static_cast<std::int64_t>(col.size()) > cert.k) {
      throw InvariantError("main_decompose: generators are not k-disjoint");
    }
    std::stable_sort(col.begin(), col.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t i = 0; i < col.size(); ++i) {
      auto row = static_cast<std::int64_t>(i + 1);
      a.set(row, j, col[i].first);
      provenance[static_cast<std::size_t>((row - 1) * l + (j - 1))] = col[i].second;
    }
  }

  for (unsigned long bits = 64;; bits *= 2) {
    cert.eta = eta_enclosure(epsilon, p, bits);
    cert.eta_used = cert.eta.hi;
    if (pow(cert.eta_used, 4) <= epsilon) break;
    if (bits >= 4096) throw InvariantError("main_decompose: eta enclosure does not resolve eta <= eps^{1/4}");
  }

  if (l > 0) {
    cert.breakpoints = column_blocking(a, cert.eta_used * m_rat);
  } else {
    cert.breakpoints = {0};
  }
  const Rational block_bound = (cert.eta_used + epsilon) * m_rat;

  std::vector<Rational> rho_list;
  Rational max_ratio = 0;
  for (std::size_t b = 0; b + 1 < cert.breakpoints.size(); ++b) {
    DecompositionBlock block;
    block.first_col = cert.breakpoints[b] + 1;
    block.last_col = cert.breakpoints[b + 1];
    const std::int64_t width = block.last_col - block.first_col + 1;
    UnitMatrix sub(cert.k, width);
    for (std::int64_t i = 1; i <= cert.k; ++i) {
      for (std::int64_t jj = 1; jj <= width; ++jj) sub.set(i, jj, a.at(i, block.first_col + jj - 1));
    }
    block.mass = sub.total();
    PartitionResult parts = partition_matrix(sub, block_bound);
    block.reductions = parts.reductions;
    for (const auto& part : parts.parts) {
      std::vector<std::int64_t> d(static_cast<std::size_t>(l), 0);
      for (const Cell& c : part) {
        std::int64_t j = block.first_col + c.col - 1;
        if (a.at(c.row, j) == 0) continue;
        std::size_t q = provenance[static_cast<std::size_t>((c.row - 1) * l + (j - 1))];
        // sqrt(a_{i,j}) = m_{q,j}/j, so the row count carries over unchanged.
        d[static_cast<std::size_t>(j - 1)] = bs[q].count(j);
      }
      block.pieces.emplace_back(std::move(d));
    }
    cert.blocks.push_back(std::move(block));
    std::size_t idx = cert.blocks.size() - 1;
    cert.blocks[idx].rho_sq = rho_sq(cert.block_element(idx));
    rho_list.push_back(cert.blocks[idx].rho_sq);
    Rational ratio(static_cast<long>(cert.blocks[idx].pieces.size()), cert.m);
    ratio.canonicalize();
    if (ratio > max_ratio) max_ratio = ratio;
  }

  Rational lorentz_hi = lorentz_value_sq(rho_list, p).hi;
  cert.scale = std::max(max_ratio, lorentz_hi);

  VerifyReport report = verify_decomposition(cert);
  if (!report.ok()) {
    std::ostringstream os;
    os << "main_decompose: certificate failed verification (M=" << cert.m
       << ", eps=" << to_string(epsilon) << ", t=" << cert.blocks.size() << "): " << join(report.failures);
    throw InvariantError(os.str());
  }
  return cert;
}

VerifyReport verify_decomposition(const DecompositionCertificate& cert) {
  VerifyReport rep;
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };
  const auto& bs = cert.generators;
  const Rational& eps = cert.epsilon;
  const LorentzParam& p = cert.p;

  if (bs.empty() || cert.m != static_cast<std::int64_t>(bs.size())) {
    fail("M does not match the generator count");
    return rep;
  }
  if (eps <= 0 || eps >= 1) {
    fail("epsilon outside (0,1)");
    return rep;
  }
  const Rational m_rat(cert.m);
  const TriVector x = average_generators(bs);
  if (sup_norm(x) > eps) fail("sup norm of the average exceeds epsilon");
  if (cert.k != floor(eps * m_rat).get_si()) fail("k != floor(eps M)");
  if (disjointness_degree(bs) > cert.k) fail("generators are not k-disjoint");

  const Rational& eta = cert.eta_used;
  if (!eta_dominates(eta, eps, p)) fail("eta_used is below eta");
  if (pow(eta, 4) > eps) fail("eta_used exceeds eps^{1/4}");

  const std::int64_t l = support_length(bs);
  const auto& br = cert.breakpoints;
  if (br.empty() || br.front() != 0 || br.back() != l) fail("breakpoints do not span 0..l");
  for (std::size_t i = 1; i < br.size(); ++i) {
    if (br[i] <= br[i - 1]) fail("breakpoints not strictly increasing");
  }
  if (br.size() != cert.blocks.size() + 1) {
    fail("block count does not match breakpoints");
    return rep;
  }
  const auto t = static_cast<std::int64_t>(cert.blocks.size());
  if (t > 0 && !((t - 1) * eta < 1)) fail("t >= 1/eta + 1");

  std::vector<Rational> column_mass(static_cast<std::size_t>(l + 1), Rational(0));
  for (const auto& b : bs) {
    for (std::int64_t j = 1; j <= l; ++j) {
      Rational v = b.value(j);
      column_mass[static_cast<std::size_t>(j)] += v * v;
    }
  }

  TriVector lhs;
  TriVector rhs;
  for (const auto& b : bs) lhs += x_b(b);
  std::map<std::int64_t, std::multiset<std::int64_t>> values_in;
  std::map<std::int64_t, std::multiset<std::int64_t>> values_out;
  for (const auto& b : bs) {
    for (std::int64_t j = 1; j <= b.length(); ++j) {
      if (b.count(j) > 0) values_in[j].insert(b.count(j));
    }
  }

  std::vector<Rational> rho_sq_list;
  std::vector<Rational> rho_4_list;
  std::set<std::int64_t> used_rows;
  for (std::int64_t m = 0; m < t; ++m) {
    const auto& block = cert.blocks[static_cast<std::size_t>(m)];
    const std::string tag = "block " + std::to_string(m) + ": ";
    if (block.first_col != br[static_cast<std::size_t>(m)] + 1 ||
        block.last_col != br[static_cast<std::size_t>(m) + 1]) {
      fail(tag + "column range disagrees with breakpoints");
    }
    Rational mass = 0;
    for (std::int64_t j = block.first_col; j <= block.last_col && j <= l; ++j) {
      if (j >= 1) mass += column_mass[static_cast<std::size_t>(j)];
    }
    if (mass != block.mass) fail(tag + "stored mass is wrong");
    if (m + 1 < t && !(mass > eta * m_rat)) fail(tag + "non-final block mass <= eta M");
    if (mass > (eta + eps) * m_rat) fail(tag + "block mass exceeds (eta + eps) M");

    const auto r_m = static_cast<std::int64_t>(block.pieces.size());
    if (Rational(r_m) > (2 * eta + 3 * eps) * m_rat) fail(tag + "r_m exceeds (2 eta + 3 eps) M");
    Rational ratio(r_m, cert.m);
    ratio.canonicalize();
    if (pow(ratio, 4) > 625 * eps) fail(tag + "(r_m/M)^4 > 625 eps");
    if (ratio > cert.scale) fail(tag + "scale below r_m/M");

    TriVector y;
    for (const auto& d : block.pieces) {
      if (d.norm_sq() > 1) fail(tag + "piece outside B");
      for (std::int64_t j = 1; j <= d.length(); ++j) {
        if (d.count(j) == 0) continue;
        if (j < block.first_col || j > block.last_col) fail(tag + "piece leaves its column block");
        values_out[j].insert(d.count(j));
        if (!used_rows.insert(j).second && (j < block.first_col || j > block.last_col)) {
          fail(tag + "blocks share a row");
        }
      }
      TriVector xd = x_b(d);
      rhs += xd;
      y += xd;
    }
    y *= Rational(1, static_cast<long>(cert.m));
    Rational rs = rho_sq(y);
    if (rs != block.rho_sq) fail(tag + "stored rho^2 is wrong");
    rho_sq_list.push_back(rs);
    rho_4_list.push_back(rs * rs);
  }

  if (lhs != rhs) fail("reassembly: sum of x_d differs from sum of x_b");
  if (values_in != values_out) fail("per-row multiset of non-zero values not preserved");
  if (!lorentz_le_powered(rho_4_list, 16 * eps, 4, p)) fail("rho-vector exceeds 2 eps^{1/4}");
  if (!lorentz_le_powered(rho_sq_list, cert.scale * cert.scale, 2, p)) fail("rho-vector exceeds scale");
  if (pow(cert.scale, 4) > 625 * eps) fail("scale^4 > 625 eps");
  return rep;
}

ARepresentative decomposition_rep(const DecompositionCertificate& cert) {
  ARepresentative rep;
  if (cert.scale == 0) return rep;
  const Rational w = 1 / (Rational(cert.m) * cert.scale);
  for (std::size_t m = 0; m < cert.blocks.size(); ++m) {
    UCertificate uc;
    uc.scale = 1;
    for (const auto& d : cert.blocks[m].pieces) {
      if (d.is_zero()) continue;
      uc.generators.push_back(d);
      uc.weights.push_back(w);
    }
    TriVector piece = cert.block_element(m) * (1 / cert.scale);
    rep.rho_sq.push_back(rho_sq(piece));
    rep.pieces.push_back(std::move(piece));
    rep.certs.push_back(std::move(uc));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Block conditions and merging

bool check_block_conditions_sq(std::span<const Rational> a_sq, std::span<const std::int64_t> breakpoints,
                               const LorentzParam& p) {
  const auto len = static_cast<std::int64_t>(a_sq.size());
  if (breakpoints.empty() || breakpoints.front() != 0 || breakpoints.back() != len) {
    throw PreconditionError("check_block_conditions: breakpoints must run from 0 to the length");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (breakpoints[i] <= breakpoints[i - 1]) {
      throw PreconditionError("check_block_conditions: breakpoints must increase strictly");
    }
  }
  const auto num = static_cast<unsigned long>(p.num());
  const auto two_den = 2UL * static_cast<unsigned long>(p.den());
  for (std::size_t b = 0; b + 1 < breakpoints.size(); ++b) {
    auto seg = a_sq.subspan(static_cast<std::size_t>(breakpoints[b]),
                            static_cast<std::size_t>(breakpoints[b + 1] - breakpoints[b]));
    if (!lorentz_le_powered(seg, Rational(1), 2, p)) return false;
    const std::int64_t n = breakpoints[b];
    if (n == 0) continue;
    Rational peak = *std::max_element(seg.begin(), seg.end());
    // sup <= n^{-1/p}  <=>  (sup^2)^{num} n^{2 den} <= 1
    if (pow(peak, num) * Rational(pow(Integer(static_cast<unsigned long>(n)), two_den)) > 1) return false;
  }
  return true;
}

bool check_block_conditions(std::span<const Rational> a, std::span<const std::int64_t> breakpoints,
                            const LorentzParam& p) {
  std::vector<Rational> sq;
  sq.reserve(a.size());
  for (const auto& v : a) sq.push_back(v * v);
  return check_block_conditions_sq(sq, breakpoints, p);
}

MergeResult merge_blocks(std::span<const ARepresentative> reps, const LorentzParam& p) {
  std::set<std::int64_t> rows;
  for (const auto& rep : reps) {
    if (auto bad = check_a_rep(rep, p)) {
      throw PreconditionError("merge_blocks: invalid representative: " + to_string(*bad));
    }
    for (std::int64_t r : rep.sum().rows()) {
      if (!rows.insert(r).second) throw PreconditionError("merge_blocks: representatives share a row");
    }
  }

  const auto num = static_cast<unsigned long>(p.num());
  const auto two_den = 2UL * static_cast<unsigned long>(p.den());
  MergeResult out;
  out.breakpoints.push_back(0);
  std::int64_t total = 0;
  std::vector<Rational> concat;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const auto& rep = reps[k];
    bool take = total == 0 ||
                pow(rep.max_rho_sq(), num) * Rational(pow(Integer(static_cast<unsigned long>(total)), two_den)) <= 1;
    if (!take) continue;
    out.selected.push_back(k);
    if (rep.length() == 0) continue;
    total += static_cast<std::int64_t>(rep.length());
    out.breakpoints.push_back(total);
    concat.insert(concat.end(), rep.rho_sq.begin(), rep.rho_sq.end());
    for (std::size_t l = 0; l < rep.length(); ++l) {
      UCertificate half = rep.certs[l];
      for (auto& w : half.weights) w /= 2;
      out.half_sum.pieces.push_back(rep.pieces[l] * Rational(1, 2));
      out.half_sum.certs.push_back(std::move(half));
      out.half_sum.rho_sq.push_back(rep.rho_sq[l] / 4);
    }
    out.prefix_certified.push_back(lorentz_le_powered(concat, Rational(4), 2, p));
  }
  if (!check_block_conditions_sq(concat, out.breakpoints, p)) {
    throw InvariantError("merge_blocks: selected blocks violate the block conditions");
  }
  if (auto bad = check_a_rep(out.half_sum, p)) {
    throw InvariantError("merge_blocks: half-sum is not in A: " + to_string(*bad));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splitting a small V-element

namespace {

// Largest r with r^8 <= 1/eps.
std::int64_t eighth_root_floor(const Rational& epsilon) {
  const Rational inv = 1 / epsilon;
  Integer fl = floor(root_enclosure(inv, 8, 8).lo);
  while (Rational(pow(Integer(fl + 1), 8)) <= inv) fl += 1;
  while (fl > 0 && Rational(pow(fl, 8)) > inv) fl -= 1;
  return fl.get_si();
}

// rho^2 > delta^2 = eps^{den/(4 num)}  <=>  (rho^2)^{4 num} > eps^{den}
bool is_large(const Rational& rho2, const Rational& delta_pow, const LorentzParam& p) {
  return pow(rho2, 4UL * static_cast<unsigned long>(p.num())) > delta_pow;
}

}  // namespace

SplitResult split_v_element(std::span<const Rational> weights, std::span<const ARepresentative> reps,
                            const Rational& epsilon, const LorentzParam& p) {
  if (weights.size() != reps.size()) throw PreconditionError("split_v_element: weights/reps size mismatch");
  if (epsilon <= 0 || epsilon >= 1) throw PreconditionError("split_v_element: need 0 < epsilon < 1");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w <= 0) throw PreconditionError("split_v_element: weights must be positive");
    total += w;
  }
  if (total > 1) throw PreconditionError("split_v_element: weights sum above 1");
  TriVector y;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (auto bad = check_a_rep(reps[i], p)) {
      throw PreconditionError("split_v_element: invalid representative: " + to_string(*bad));
    }
    for (const auto& piece : reps[i].pieces) {
      if (!piece.nonnegative()) throw PreconditionError("split_v_element: pieces must be non-negative");
    }
    y += weights[i] * reps[i].sum();
  }
  if (sup_norm(y) > epsilon) throw PreconditionError("split_v_element: sup norm exceeds epsilon");

  SplitResult out;
  out.weights.assign(weights.begin(), weights.end());
  out.delta_sq_pow = pow(epsilon, static_cast<unsigned long>(p.den()));
  out.r = eighth_root_floor(epsilon);

  for (const auto& rep : reps) {
    std::vector<std::size_t> large;
    std::vector<std::size_t> small;
    for (std::size_t l = 0; l < rep.length(); ++l) {
      (is_large(rep.rho_sq[l], out.delta_sq_pow, p) ? large : small).push_back(l);
    }
    if (static_cast<std::int64_t>(large.size()) > out.r) {
      throw InvariantError("split_v_element: more than r large pieces in a valid representative");
    }
    out.large_counts.push_back(large.size());
    std::vector<std::size_t> perm = large;
    perm.insert(perm.end(), small.begin(), small.end());
    ARepresentative tail;
    for (std::size_t l : small) {
      tail.pieces.push_back(rep.pieces[l]);
      tail.certs.push_back(rep.certs[l]);
      tail.rho_sq.push_back(rep.rho_sq[l]);
    }
    out.permutations.push_back(std::move(perm));
    out.tails.push_back(std::move(tail));
  }

  for (std::int64_t l = 0; l < out.r; ++l) {
    TriVector vl;
    UCertificate cover;
    cover.scale = 1;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (static_cast<std::size_t>(l) >= out.large_counts[i]) continue;
      std::size_t idx = out.permutations[i][static_cast<std::size_t>(l)];
      const auto& piece = reps[i].pieces[idx];
      const auto& uc = reps[i].certs[idx];
      vl += weights[i] * piece;
      for (std::size_t q = 0; q < uc.generators.size(); ++q) {
        cover.generators.push_back(uc.generators[q]);
        cover.weights.push_back(weights[i] * uc.scale * uc.weights[q]);
      }
    }
    out.v += vl;
    if (vl.empty()) {
      out.v_parts.push_back(std::move(vl));
      out.v_certs.emplace_back(std::nullopt);
      out.v_bounds.emplace_back(0);
      continue;
    }
    std::vector<BSeq> presentation = small_sup_presentation(vl, cover, epsilon);
    DecompositionCertificate dc = main_decompose(presentation, epsilon, p);
    // v_l is itself in U, so its gauge is also at most 1.
    Rational bound = dc.scale < 1 ? dc.scale : Rational(1);
    out.v_parts.push_back(std::move(vl));
    out.v_certs.emplace_back(std::move(dc));
    out.v_bounds.push_back(bound);
  }
  out.tau_v_bound = 0;
  for (const auto& b : out.v_bounds) out.tau_v_bound += b;

  for (std::size_t i = 0; i < reps.size(); ++i) out.u += weights[i] * out.tails[i].sum();
  return out;
}

VerifyReport verify_split(const SplitResult& split, std::span<const ARepresentative> reps,
                          const Rational& epsilon, const LorentzParam& p) {
  VerifyReport rep;
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };
  if (split.weights.size() != reps.size() || split.tails.size() != reps.size()) {
    fail("shape mismatch");
    return rep;
  }
  TriVector y;
  Rational weight_total = 0;
  bool in_hull = true;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    y += split.weights[i] * reps[i].sum();
    weight_total += split.weights[i];
    in_hull = in_hull && split.weights[i] > 0 && !check_a_rep(reps[i], p);
  }
  in_hull = in_hull && weight_total <= 1;
  if (split.u + split.v != y) fail("u + v differs from the input");

  TriVector u;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (check_a_rep(split.tails[i], p)) fail("tail " + std::to_string(i) + " is not in A");
    for (const auto& r2 : split.tails[i].rho_sq) {
      if (is_large(r2, pow(epsilon, static_cast<unsigned long>(p.den())), p)) {
        fail("tail " + std::to_string(i) + " is not eps^{1/8p}-small");
      }
    }
    u += split.weights[i] * split.tails[i].sum();
  }
  if (u != split.u) fail("u is not the weighted sum of the tails");

  Integer r = split.r;
  if (Rational(pow(r, 8)) > 1 / epsilon || Rational(pow(Integer(r + 1), 8)) <= 1 / epsilon) fail("r != floor(eps^{-1/8})");
  if (static_cast<std::int64_t>(split.v_parts.size()) > split.r) fail("more than r parts in v");

  TriVector v;
  Rational bound_sum = 0;
  for (std::size_t l = 0; l < split.v_parts.size(); ++l) {
    const auto& vl = split.v_parts[l];
    v += vl;
    if (sup_norm(vl) > epsilon) fail("v_" + std::to_string(l) + " has sup above epsilon");
    const Rational& b = split.v_bounds[l];
    if (vl.empty()) continue;
    const auto& dc = split.v_certs[l];
    if (!dc) {
      fail("v_" + std::to_string(l) + " lacks a decomposition certificate");
      continue;
    }
    if (!verify_decomposition(*dc).ok()) fail("v_" + std::to_string(l) + " certificate does not verify");
    if (!vl.dominated_by(average_generators(dc->generators))) {
      fail("v_" + std::to_string(l) + " is not dominated by its presentation");
    }
    // b = 1 is justified by 0 <= v_l <= y with y in co(A); otherwise the certificate must cover b.
    if (b < dc->scale && !(b == 1 && in_hull && vl.dominated_by(y))) {
      fail("v_" + std::to_string(l) + " bound below its certificate");
    }
    if (pow(b, 4) > 625 * epsilon) fail("v_" + std::to_string(l) + " bound exceeds 5 eps^{1/4}");
    bound_sum += b;
  }
  if (v != split.v) fail("v is not the sum of its parts");
  if (bound_sum != split.tau_v_bound) fail("tau_v_bound is not the sum of part bounds");
  if (pow(split.tau_v_bound, 8) > pow(Rational(5), 8) * epsilon) fail("tau_v_bound^8 > 5^8 eps");
  return rep;
}

}  // namespace gaugecert

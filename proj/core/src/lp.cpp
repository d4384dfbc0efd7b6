#include "gaugecert/lp.hpp"

namespace gaugecert::lp {

Solution maximize(const std::vector<Rational>& c, const Matrix& a, const std::vector<Rational>& b) {
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  if (c.size() != n || b.size() != m) throw PreconditionError("lp::maximize: shape mismatch");
  for (const auto& v : b) {
    if (v < 0) throw PreconditionError("lp::maximize: right-hand side must be non-negative");
  }

  const std::size_t width = n + m + 1;  // structural, slack, rhs
  std::vector<Rational> t(m * width);
  auto at = [&](std::size_t r, std::size_t col) -> Rational& { return t[r * width + col]; };
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t col = 0; col < n; ++col) at(r, col) = a(r, col);
    at(r, n + r) = 1;
    at(r, n + m) = b[r];
  }
  std::vector<Rational> obj(width);
  for (std::size_t col = 0; col < n; ++col) obj[col] = c[col];
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

  Solution sol;
  Rational ratio;
  Rational best;
  for (;;) {
    std::size_t enter = width;
    for (std::size_t col = 0; col + 1 < width; ++col) {
      if (obj[col] > 0) {
        enter = col;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    for (std::size_t r = 0; r < m; ++r) {
      const Rational& coef = at(r, enter);
      if (coef <= 0) continue;
      ratio = at(r, n + m) / coef;
      if (leave == m || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == m) throw PreconditionError("lp::maximize: objective unbounded");

    const Rational pivot = at(leave, enter);
    for (std::size_t col = 0; col < width; ++col) {
      if (at(leave, col) != 0) at(leave, col) /= pivot;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave) continue;
      const Rational factor = at(r, enter);
      if (factor == 0) continue;
      for (std::size_t col = 0; col < width; ++col) {
        const Rational& pv = at(leave, col);
        if (pv != 0) at(r, col) -= factor * pv;
      }
    }
    const Rational factor = obj[enter];
    for (std::size_t col = 0; col < width; ++col) {
      const Rational& pv = at(leave, col);
      if (pv != 0) obj[col] -= factor * pv;
    }
    basis[leave] = enter;
    ++sol.pivots;
  }

  sol.primal.assign(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) sol.primal[basis[r]] = at(r, n + m);
  }
  sol.dual.resize(m);
  for (std::size_t r = 0; r < m; ++r) sol.dual[r] = -obj[n + r];
  sol.value = -obj[n + m];
  return sol;
}

CoverSolution min_cover(const Matrix& cover, const std::vector<Rational>& demand) {
  if (demand.size() != cover.rows) throw PreconditionError("lp::min_cover: shape mismatch");
  for (std::size_t r = 0; r < cover.rows; ++r) {
    if (demand[r] <= 0) continue;
    bool covered = false;
    for (std::size_t col = 0; col < cover.cols && !covered; ++col) covered = cover(r, col) > 0;
    if (!covered) throw PreconditionError("lp::min_cover: uncoverable demand row");
  }
  // Dual: rows of the LP are generators, variables are the demand rows.
  Matrix dual_a(cover.cols, cover.rows);
  for (std::size_t r = 0; r < cover.rows; ++r) {
    for (std::size_t col = 0; col < cover.cols; ++col) dual_a(col, r) = cover(r, col);
  }
  std::vector<Rational> ones(cover.cols, Rational(1));
  Solution s = maximize(demand, dual_a, ones);
  return {s.value, std::move(s.dual), std::move(s.primal)};
}

}  // namespace gaugecert::lp

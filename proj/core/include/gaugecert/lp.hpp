#pragma once

#include <vector>

#include "gaugecert/rational.hpp"

namespace gaugecert::lp {

/// Dense row-major rational matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Rational& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct Solution {
  Rational value;
  std::vector<Rational> primal;  ///< optimal x
  std::vector<Rational> dual;    ///< optimal multipliers of the rows of A, >= 0
  std::size_t pivots = 0;
};

/// maximize c.x subject to A x <= b, x >= 0, where b >= 0 so the slack basis
/// is feasible. Exact simplex with Bland's rule; deterministic.
/// Throws PreconditionError on shape mismatch, negative b, or unboundedness.
Solution maximize(const std::vector<Rational>& c, const Matrix& a, const std::vector<Rational>& b);

struct CoverSolution {
  Rational value;                 ///< min sum of weights
  std::vector<Rational> weights;  ///< one per column of the cover matrix
  std::vector<Rational> dual;     ///< one per row, certifies the optimum
};

/// minimize 1.w subject to K w >= demand, w >= 0, for a non-negative matrix K
/// (rows: constraints, cols: generators). Solved through its dual
/// max demand.f s.t. K^T f <= 1, f >= 0. Throws PreconditionError when some
/// positive demand row has no covering column.
CoverSolution min_cover(const Matrix& cover, const std::vector<Rational>& demand);

}  // namespace gaugecert::lp

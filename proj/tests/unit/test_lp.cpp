#include <random>

#include "doctest.h"
#include "gaugecert/lp.hpp"

using namespace gaugecert;
using namespace gaugecert::lp;

namespace {

// Brute force: the optimum of a bounded LP max c.x, Ax <= b, x >= 0 is attained
// at a vertex, i.e. a feasible basic solution. For n = 2 variables enumerate all
// intersections of pairs of the m + 2 constraint lines.
Rational brute_max2(const std::vector<Rational>& c, const Matrix& a, const std::vector<Rational>& b) {
  struct Line {
    Rational u, v, w;  // u x + v y = w
  };
  std::vector<Line> lines;
  for (std::size_t r = 0; r < a.rows; ++r) lines.push_back({a(r, 0), a(r, 1), b[r]});
  lines.push_back({1, 0, 0});
  lines.push_back({0, 1, 0});
  bool any = false;
  Rational best;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const Rational det = lines[i].u * lines[j].v - lines[i].v * lines[j].u;
      if (det == 0) continue;
      const Rational x = (lines[i].w * lines[j].v - lines[i].v * lines[j].w) / det;
      const Rational y = (lines[i].u * lines[j].w - lines[i].w * lines[j].u) / det;
      if (x < 0 || y < 0) continue;
      bool ok = true;
      for (std::size_t r = 0; r < a.rows; ++r) ok = ok && a(r, 0) * x + a(r, 1) * y <= b[r];
      if (!ok) continue;
      const Rational val = c[0] * x + c[1] * y;
      if (!any || val > best) best = val;
      any = true;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("textbook maximum") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
  Matrix a(3, 2);
  a(0, 0) = 1;
  a(1, 1) = 2;
  a(2, 0) = 3;
  a(2, 1) = 2;
  const Solution s = maximize({3, 5}, a, {4, 12, 18});
  CHECK(s.value == 36);
  CHECK(s.primal == std::vector<Rational>{2, 6});
  Rational dual_obj = 4 * s.dual[0] + 12 * s.dual[1] + 18 * s.dual[2];
  CHECK(dual_obj == 36);
}

TEST_CASE("unbounded and malformed problems throw") {
  Matrix a(1, 2);
  a(0, 0) = 1;
  CHECK_THROWS_AS(maximize({1, 1}, a, {1}), PreconditionError);
  CHECK_THROWS_AS(maximize({1, 1}, a, {-1}), PreconditionError);
  CHECK_THROWS_AS(maximize({1}, a, {1}), PreconditionError);
}

TEST_CASE("random two-variable LPs against vertex enumeration") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coef(0, 9), rhs(1, 20), rows(1, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = rows(rng);
    Matrix a(m, 2);
    std::vector<Rational> b(m);
    for (int r = 0; r < m; ++r) {
      a(r, 0) = ratio(coef(rng), 1 + coef(rng));
      a(r, 1) = ratio(coef(rng), 1 + coef(rng));
      b[r] = rhs(rng);
    }
    // keep it bounded
    bool cx = false, cy = false;
    for (int r = 0; r < m; ++r) {
      cx = cx || a(r, 0) > 0;
      cy = cy || a(r, 1) > 0;
    }
    if (!cx) a(0, 0) = 1;
    if (!cy) a(0, 1) = 1;
    std::vector<Rational> c{Rational(coef(rng)), Rational(coef(rng))};
    const Solution s = maximize(c, a, b);
    CHECK(s.value == brute_max2(c, a, b));
    // primal feasibility and complementary certificate
    for (int r = 0; r < m; ++r) CHECK(a(r, 0) * s.primal[0] + a(r, 1) * s.primal[1] <= b[r]);
    Rational dual_obj = 0;
    for (int r = 0; r < m; ++r) dual_obj += b[r] * s.dual[r];
    CHECK(dual_obj == s.value);
    for (int col = 0; col < 2; ++col) {
      Rational lhs = 0;
      for (int r = 0; r < m; ++r) lhs += a(r, col) * s.dual[r];
      CHECK(lhs >= c[col]);
    }
  }
}

TEST_CASE("min cover") {
  // Cover (1,1) with columns (1,0), (0,1), (1,1): optimum 1 via the last.
  Matrix k(2, 3);
  k(0, 0) = 1;
  k(1, 1) = 1;
  k(0, 2) = 1;
  k(1, 2) = 1;
  const CoverSolution s = min_cover(k, {1, 1});
  CHECK(s.value == 1);
  for (std::size_t r = 0; r < 2; ++r) {
    Rational got = 0;
    for (std::size_t col = 0; col < 3; ++col) got += k(r, col) * s.weights[col];
    CHECK(got >= 1);
  }
  CHECK(s.dual[0] + s.dual[1] == 1);

  Matrix none(1, 1);
  CHECK_THROWS_AS(min_cover(none, {1}), PreconditionError);
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>

#include "gaugecert/rational.hpp"

namespace gaugecert {

/// A point (i, j) of the triangular index set, 1 <= j <= i.
struct TriPoint {
  std::int64_t i = 1;
  std::int64_t j = 1;

  TriPoint() = default;
  TriPoint(std::int64_t row, std::int64_t col);

  auto operator<=>(const TriPoint&) const = default;
};

/// Finitely supported rational function on the triangular index set.
/// Zero values are never stored.
class TriVector {
 public:
  using Map = std::map<TriPoint, Rational>;

  TriVector() = default;

  /// Unit vector e_{i,j}.
  static TriVector unit(std::int64_t i, std::int64_t j);
  /// All-ones row i.
  static TriVector row_ones(std::int64_t i);

  [[nodiscard]] Rational get(const TriPoint& p) const;
  [[nodiscard]] Rational get(std::int64_t i, std::int64_t j) const { return get(TriPoint{i, j}); }
  void set(const TriPoint& p, const Rational& v);
  void set(std::int64_t i, std::int64_t j, const Rational& v) { set(TriPoint{i, j}, v); }
  void add(const TriPoint& p, const Rational& v);

  [[nodiscard]] const Map& entries() const { return entries_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] std::set<std::int64_t> rows() const;
  [[nodiscard]] std::int64_t max_row() const;

  /// Restriction to a set of rows (zero elsewhere).
  [[nodiscard]] TriVector restrict_rows(const std::set<std::int64_t>& keep) const;
  [[nodiscard]] TriVector abs() const;
  /// True iff every entry is >= 0.
  [[nodiscard]] bool nonnegative() const;
  /// True iff |*this| <= |other| pointwise.
  [[nodiscard]] bool dominated_by(const TriVector& other) const;

  TriVector& operator+=(const TriVector& o);
  TriVector& operator-=(const TriVector& o);
  TriVector& operator*=(const Rational& c);

  friend TriVector operator+(TriVector a, const TriVector& b) { return a += b; }
  friend TriVector operator-(TriVector a, const TriVector& b) { return a -= b; }
  friend TriVector operator*(const Rational& c, TriVector a) { return a *= c; }
  friend TriVector operator*(TriVector a, const Rational& c) { return a *= c; }
  friend bool operator==(const TriVector&, const TriVector&) = default;

 private:
  Map entries_;
};

/// Text format: header "trivector 1", then lines "i j num/den".
void write_trivector(std::ostream& out, const TriVector& x);
std::string format_trivector(const TriVector& x);
/// Throws PreconditionError on malformed input (bad header, j > i, duplicate
/// entry, zero value, non-positive denominator).
TriVector read_trivector(std::istream& in);
TriVector parse_trivector(const std::string& text);

}  // namespace gaugecert

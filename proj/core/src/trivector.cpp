#include "gaugecert/trivector.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace gaugecert {

TriPoint::TriPoint(std::int64_t row, std::int64_t col) : i(row), j(col) {
  if (col < 1 || col > row) {
    throw PreconditionError("TriPoint: need 1 <= j <= i, got (" + std::to_string(row) + "," +
                            std::to_string(col) + ")");
  }
}

TriVector TriVector::unit(std::int64_t i, std::int64_t j) {
  TriVector x;
  x.set(i, j, 1);
  return x;
}

TriVector TriVector::row_ones(std::int64_t i) {
  TriVector x;
  for (std::int64_t j = 1; j <= i; ++j) x.set(i, j, 1);
  return x;
}

Rational TriVector::get(const TriPoint& p) const {
  auto it = entries_.find(p);
  return it == entries_.end() ? Rational(0) : it->second;
}

void TriVector::set(const TriPoint& p, const Rational& v) {
  if (v == 0) {
    entries_.erase(p);
  } else {
    Rational& slot = entries_[p];
    slot = v;
    slot.canonicalize();
  }
}

void TriVector::add(const TriPoint& p, const Rational& v) {
  if (v == 0) return;
  auto [it, inserted] = entries_.try_emplace(p, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) entries_.erase(it);
  }
}

std::set<std::int64_t> TriVector::rows() const {
  std::set<std::int64_t> out;
  for (const auto& [p, v] : entries_) out.insert(p.i);
  return out;
}

std::int64_t TriVector::max_row() const { return entries_.empty() ? 0 : entries_.rbegin()->first.i; }

TriVector TriVector::restrict_rows(const std::set<std::int64_t>& keep) const {
  TriVector out;
  for (const auto& [p, v] : entries_) {
    if (keep.contains(p.i)) out.entries_.emplace_hint(out.entries_.end(), p, v);
  }
  return out;
}

TriVector TriVector::abs() const {
  TriVector out = *this;
  for (auto& [p, v] : out.entries_) {
    if (v < 0) v = -v;
  }
  return out;
}

bool TriVector::nonnegative() const {
  for (const auto& [p, v] : entries_) {
    if (v < 0) return false;
  }
  return true;
}

bool TriVector::dominated_by(const TriVector& other) const {
  for (const auto& [p, v] : entries_) {
    if (gaugecert::abs(v) > gaugecert::abs(other.get(p))) return false;
  }
  return true;
}

TriVector& TriVector::operator+=(const TriVector& o) {
  for (const auto& [p, v] : o.entries_) add(p, v);
  return *this;
}

TriVector& TriVector::operator-=(const TriVector& o) {
  for (const auto& [p, v] : o.entries_) add(p, -v);
  return *this;
}

TriVector& TriVector::operator*=(const Rational& c) {
  if (c == 0) {
    entries_.clear();
    return *this;
  }
  for (auto& [p, v] : entries_) v *= c;
  return *this;
}

void write_trivector(std::ostream& out, const TriVector& x) {
  out << "trivector 1\n";
  for (const auto& [p, v] : x.entries()) {
    out << p.i << ' ' << p.j << ' ' << v.get_num().get_str() << '/' << v.get_den().get_str()
        << '\n';
  }
}

std::string format_trivector(const TriVector& x) {
  std::ostringstream os;
  write_trivector(os, x);
  return os.str();
}

TriVector read_trivector(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError("trivector: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "trivector 1") throw PreconditionError("trivector: bad header '" + line + "'");

  TriVector x;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ls(line);
    std::int64_t i = 0;
    std::int64_t j = 0;
    std::string value;
    std::string extra;
    if (!(ls >> i >> j >> value) || (ls >> extra)) {
      throw PreconditionError("trivector: malformed line " + std::to_string(lineno));
    }
    auto slash = value.find('/');
    if (slash != std::string::npos && (value.size() <= slash + 1 || value[slash + 1] == '-')) {
      throw PreconditionError("trivector: denominator must be positive at line " +
                              std::to_string(lineno));
    }
    Rational v = parse_rational(value);
    if (v == 0) throw PreconditionError("trivector: zero entry at line " + std::to_string(lineno));
    TriPoint p(i, j);
    if (x.entries().contains(p)) {
      throw PreconditionError("trivector: duplicate entry at line " + std::to_string(lineno));
    }
    x.set(p, v);
  }
  return x;
}

TriVector parse_trivector(const std::string& text) {
  std::istringstream is(text);
  return read_trivector(is);
}

}  // namespace gaugecert

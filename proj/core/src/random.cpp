#include "gaugecert/random.hpp"

#include <limits>

namespace gaugecert {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_stream(std::uint64_t seed, std::string_view suite, std::uint64_t trial) {
  // FNV-1a of the suite name keeps streams of different suites apart.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : suite) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = splitmix64(seed ^ splitmix64(h ^ splitmix64(trial)));
  return std::mt19937_64(s);
}

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw PreconditionError("uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

Rational uniform_unit_rational(std::mt19937_64& rng, std::int64_t max_den) {
  std::int64_t den = uniform_int(rng, 1, max_den);
  std::int64_t num = uniform_int(rng, 0, den);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::vector<Rational> random_unit_b(std::mt19937_64& rng, std::size_t len, std::int64_t max_abs,
                                    double density) {
  if (len == 0 || max_abs < 1) throw PreconditionError("random_unit_b: need len >= 1 and max_abs >= 1");
  const auto cutoff = static_cast<std::int64_t>(density * 1000000.0);
  std::vector<std::int64_t> q(len);
  for (;;) {
    Integer sum = 0;
    for (auto& v : q) {
      v = uniform_int(rng, 0, 999999) < cutoff ? uniform_int(rng, -max_abs, max_abs) : 0;
      sum += Integer(static_cast<long>(v)) * static_cast<long>(v);
    }
    if (sum == 0 || !mpz_perfect_square_p(sum.get_mpz_t())) continue;
    Integer root = sqrt(sum);
    std::vector<Rational> b;
    b.reserve(len);
    for (auto v : q) {
      Rational x(Integer(static_cast<long>(v)), root);
      x.canonicalize();
      b.push_back(x);
    }
    return b;
  }
}

}  // namespace gaugecert

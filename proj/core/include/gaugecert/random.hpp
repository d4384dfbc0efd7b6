#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "gaugecert/rational.hpp"

namespace gaugecert {

std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream for (seed, suite, trial); stable across trial counts.
std::mt19937_64 trial_stream(std::uint64_t seed, std::string_view suite, std::uint64_t trial);

/// Uniform integer in [lo, hi] by rejection; identical on every platform.
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

/// Uniform rational num/den with 0 <= num <= den, den in [1, max_den].
Rational uniform_unit_rational(std::mt19937_64& rng, std::int64_t max_den);

/// Exact-unit rational b of the given length: integer vector q with entries in
/// [-max_abs, max_abs], resampled until sum q^2 is a non-zero perfect square.
/// `density` in (0, 1] is the chance that a coordinate is non-zero.
std::vector<Rational> random_unit_b(std::mt19937_64& rng, std::size_t len, std::int64_t max_abs,
                                    double density = 1.0);

}  // namespace gaugecert

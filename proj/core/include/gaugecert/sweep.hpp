#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gaugecert/arep.hpp"
#include "gaugecert/decompose.hpp"
#include "gaugecert/generators.hpp"
#include "gaugecert/norms.hpp"

namespace gaugecert {

struct SweepConfig {
  std::string suite;
  LorentzParam p;
  std::uint64_t seed = 1;
  std::int64_t trials = 100;
  std::int64_t max_row = 50;
  std::int64_t max_m = 200;
  std::optional<Rational> epsilon;  ///< overrides the suite's epsilon rotation
  Rational tol{1, 1000};            ///< oracle width target (sandwich)
  unsigned threads = 1;
};

/// Throws PreconditionError for unknown suites or out-of-range caps.
void validate(const SweepConfig& config);

const std::vector<std::string>& suite_names();

struct TrialRecord {
  std::uint64_t trial = 0;
  bool pass = false;
  std::string input;   ///< canonical JSON of the generated instance
  std::string digest;  ///< FNV-1a of the produced certificate(s)
  std::map<std::string, std::string> metrics;
  std::string failure;
};

struct Report {
  std::string suite;
  SweepConfig config;
  std::vector<TrialRecord> records;
  std::map<std::string, std::string> stats;
  [[nodiscard]] std::vector<const TrialRecord*> failures() const;
  [[nodiscard]] bool pass() const { return failures().empty(); }
};

/// One trial of a suite; its randomness depends only on (seed, suite, trial).
TrialRecord run_trial(const SweepConfig& config, std::uint64_t trial);

/// All trials, ordered by index regardless of thread count.
Report run_suite(const SweepConfig& config);

std::string report_json(const Report& report);
std::string report_csv(const Report& report);
Report report_from_json(const std::string& text);

// Instance families. Each satisfies its family's preconditions by construction.

/// Entries in [0,1] with sum > 1, length in [2, max_len].
std::vector<Rational> select_instance(std::mt19937_64& rng, std::size_t max_len);

/// k x l matrix, k, l in [1, max_dim], entries in [0,1] with some zeros.
UnitMatrix matrix_instance(std::mt19937_64& rng, std::int64_t max_dim);

/// n rational sequences of length len in the l2 unit ball, at most k non-zero
/// at any coordinate.
std::vector<std::vector<Rational>> kdisjoint_family(std::mt19937_64& rng, std::int64_t k, std::int64_t n,
                                                    std::int64_t len);

/// M generators on rows <= rows whose average has sup norm <= epsilon; every
/// row is used by at most floor(epsilon M) of them. `heavy` pushes norms
/// towards 1.
std::vector<BSeq> smallsup_generators(std::mt19937_64& rng, const Rational& epsilon, std::int64_t m,
                                      std::int64_t rows, bool heavy = false);

/// Squared sequence built block by block to satisfy the block conditions.
std::vector<Rational> block_sequence_sq(std::mt19937_64& rng, const LorentzParam& p,
                                        std::vector<std::int64_t>& breakpoints);

/// Random valid representative on rows [first_row, first_row + span).
ARepresentative random_a_rep(std::mt19937_64& rng, std::int64_t first_row, std::int64_t span,
                             const LorentzParam& p);

/// Random element of V with its certificate.
VCertificate random_v_certificate(std::mt19937_64& rng, std::int64_t max_row, const LorentzParam& p);

/// x supported on rows <= 3.
TriVector micro_instance(std::mt19937_64& rng);

/// Pairwise row-disjoint representatives whose largest rho decays fast
/// enough for every one to be merged.
std::vector<ARepresentative> strongly_decreasing_family(std::mt19937_64& rng, std::size_t len,
                                                        const LorentzParam& p);

}  // namespace gaugecert

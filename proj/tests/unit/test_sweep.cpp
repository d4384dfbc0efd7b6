#include <algorithm>

#include "doctest.h"
#include "gaugecert/random.hpp"
#include "gaugecert/report.hpp"
#include "gaugecert/sweep.hpp"

using namespace gaugecert;

namespace {

SweepConfig config(const std::string& suite, std::int64_t trials) {
  SweepConfig c;
  c.suite = suite;
  c.trials = trials;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(validate(config("nosuch", 1)), PreconditionError);
  CHECK_THROWS_AS(validate(config("select", 0)), PreconditionError);
  auto c = config("select", 1);
  c.max_row = 0;
  CHECK_THROWS_AS(validate(c), PreconditionError);
  CHECK_NOTHROW(validate(config("merge", 1)));
  CHECK(suite_names().size() == 10);
}

TEST_CASE("trial streams are stable and independent") {
  auto a = trial_stream(1, "select", 5);
  auto b = trial_stream(1, "select", 5);
  auto c = trial_stream(1, "select", 6);
  auto d = trial_stream(2, "select", 5);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
  for (int k = 0; k < 1000; ++k) {
    const auto v = uniform_int(a, -3, 4);
    CHECK(v >= -3);
    CHECK(v <= 4);
  }
}

TEST_CASE("generated instances meet their preconditions") {
  auto rng = trial_stream(1, "unit-gen", 0);
  const auto fam = kdisjoint_family(rng, 3, 10, 20);
  CHECK(fam.size() == 10);
  for (std::size_t j = 0; j < 20; ++j) {
    int nonzero = 0;
    for (const auto& x : fam) nonzero += j < x.size() && x[j] != 0;
    CHECK(nonzero <= 3);
  }
  for (const auto& x : fam) CHECK(l2_norm_sq(x) <= 1);

  const auto bs = smallsup_generators(rng, Rational(1, 16), 64, 20);
  CHECK(bs.size() == 64);
  CHECK(sup_norm(average_generators(bs)) <= Rational(1, 16));

  const auto b = random_unit_b(rng, 8, 9);
  CHECK(b.size() == 8);
  CHECK(l2_norm_sq(b) == 1);
}

TEST_CASE("reports are deterministic and thread-count independent") {
  for (const auto& suite : suite_names()) {
    auto c = config(suite, suite == "merge" ? 3 : 12);
    const std::string a = report_json(run_suite(c));
    const std::string b = report_json(run_suite(c));
    CHECK(a == b);
    c.threads = 3;
    CHECK(report_json(run_suite(c)) == a);
  }
}

TEST_CASE("trial sets do not depend on the trial count") {
  const Report small = run_suite(config("mainlemma", 4));
  const Report big = run_suite(config("mainlemma", 8));
  for (std::size_t t = 0; t < 4; ++t) {
    CHECK(small.records[t].digest == big.records[t].digest);
    CHECK(small.records[t].input == big.records[t].input);
  }
}

TEST_CASE("report roundtrip and replay") {
  const Report r = run_suite(config("partition", 10));
  CHECK(r.pass());
  const std::string text = report_json(r);
  const Report back = report_from_json(text);
  CHECK(report_json(back) == text);
  for (const auto& rec : back.records) {
    const TrialRecord again = run_trial(back.config, rec.trial);
    CHECK(again.digest == rec.digest);
    CHECK(again.pass == rec.pass);
  }
}

TEST_CASE("csv summary") {
  const Report r = run_suite(config("select", 5));
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("trial,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

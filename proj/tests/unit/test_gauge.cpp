#include "doctest.h"
#include "gaugecert/gauge.hpp"
#include "gaugecert/random.hpp"
#include "gaugecert/sweep.hpp"

using namespace gaugecert;

namespace {

const LorentzParam P32(3, 2);

UCertificate trivial(const BSeq& b) { return {{b}, {1}, 1}; }

BSeq row_gen(std::int64_t i, std::int64_t m) {
  std::vector<std::int64_t> c(i, 0);
  c[i - 1] = m;
  return BSeq(c);
}

Rational c_hi() { return default_constant_C(P32).c.hi; }

}  // namespace

TEST_CASE("A-representative validation") {
  const BSeq b = make_b({0, 1, 2});
  CHECK_NOTHROW(make_a_rep({{x_b(b), trivial(b)}}, P32));

  const BSeq r1 = make_b({0, 1}), r2 = make_b({0, 2});
  try {
    make_a_rep({{x_b(r1), trivial(r1)}, {x_b(r2) - x_b(r1), trivial(r2)}}, P32);
    FAIL("same-row pieces accepted");
  } catch (const ARepRejected& e) {
    CHECK(e.clause() == ARepClause::NotRowDisjoint);
  }

  // two pieces with rho^2 = 1 each: 1 * 2^{2/3} > 1
  const BSeq a1 = row_gen(1, 1), a2 = row_gen(2, 2);
  try {
    make_a_rep({{x_b(a1), trivial(a1)}, {x_b(a2), trivial(a2)}}, P32);
    FAIL("Lorentz violation accepted");
  } catch (const ARepRejected& e) {
    CHECK(e.clause() == ARepClause::LorentzViolated);
  }

  // piece not covered by its certificate
  try {
    make_a_rep({{Rational(2) * x_b(a1), trivial(a1)}}, P32);
    FAIL("uncovered piece accepted");
  } catch (const ARepRejected& e) {
    CHECK(e.clause() == ARepClause::InvalidUCertificate);
  }

  ARepresentative rep = singleton_rep(x_b(b), trivial(b));
  rep.rho_sq[0] += 1;
  CHECK(check_a_rep(rep, P32) == ARepClause::RhoMismatch);
}

TEST_CASE("phi upper") {
  ARepresentative r;
  const BSeq b3 = row_gen(3, 1), b4 = row_gen(4, 2);
  r.pieces = {Rational(9, 10) * x_b(b3), Rational(4, 5) * x_b(b4)};
  r.certs = {UCertificate{{b3}, {1}, Rational(9, 10)}, UCertificate{{b4}, {1}, Rational(4, 5)}};
  r.rho_sq = {rho_sq(r.pieces[0]), rho_sq(r.pieces[1])};
  CHECK(r.rho_sq == std::vector<Rational>{Rational(9, 100), Rational(4, 25)});
  std::vector<ARepresentative> one{r};
  CHECK(phi_upper(one) == Rational(4, 25));

  const TriVector y = r.sum();
  ARepresentative whole = singleton_rep(y, UCertificate{{make_b({0, 0, 1, 2})}, {Rational(9, 10)}, 1});
  std::vector<ARepresentative> two{r, whole};
  CHECK(phi_upper(two) == std::min(Rational(4, 25), rho_sq(y)));

  std::vector<ARepresentative> empty{ARepresentative{}};
  CHECK(phi_upper(empty) == 0);
  std::vector<ARepresentative> mismatch{r, singleton_rep(x_b(b3), trivial(b3))};
  CHECK_THROWS_AS(phi_upper(mismatch), PreconditionError);
}

TEST_CASE("upper bound examples") {
  for (const auto& b : enumerate_B(4)) {
    const TriVector x = x_b(b);
    const UpperBound u = tau_upper(x);
    CHECK(u.hi <= 1);
    CHECK(u.cert.certifies(x, P32));
  }
  const UpperBound z = tau_upper(TriVector{});
  CHECK(z.hi == 0);

  for (std::uint64_t t = 0; t < 6; ++t) {
    auto rng = trial_stream(2, "unit-upper", t);
    const Rational eps = t % 2 ? Rational(1, 4) : Rational(1, 16);
    const auto bs = smallsup_generators(rng, eps, eps.get_den().get_si() * 4, 12);
    GaugeConfig gc;
    gc.presentation = bs;
    const TriVector x = average_generators(bs);
    const UpperBound u = tau_upper(x, gc);
    CHECK(u.cert.certifies(x, P32));
    CHECK(pow(u.hi, 4) <= 625 * eps);
  }
}

TEST_CASE("lower bound examples") {
  const LowerBound a = tau_lower(TriVector::unit(1, 1));
  CHECK(a.lo >= 1);
  CHECK(a.witness.kind == LowerKind::SupNorm);
  CHECK(tau_lower(TriVector{}).lo == 0);

  const BSeq b = make_b({0, 0, 3});
  GaugeConfig gc;
  const LowerBound l = tau_lower(x_b(b), gc);
  CHECK(l.lo >= 1 / c_hi());
  CHECK(std::fabs(to_double(1 / c_hi()) - 0.527) < 1e-3);
}

TEST_CASE("micro oracle examples") {
  const Rational tol(1, 1000);
  const GaugeInterval e = tau_micro_oracle(TriVector::unit(1, 1), tol);
  CHECK(e.lo <= 1);
  CHECK(1 <= e.hi);
  CHECK(e.hi - e.lo <= tol);

  const GaugeInterval z = tau_micro_oracle(TriVector{}, tol);
  CHECK(z.lo == 0);
  CHECK(z.hi == 0);

  for (const auto& b : enumerate_B(3)) {
    if (b.norm_sq() != 1) continue;
    const GaugeInterval g = tau_micro_oracle(x_b(b), tol);
    CHECK(g.lo >= 1 / c_hi() - tol);
    CHECK(g.hi <= 1);
    CHECK(g.upper.certifies(x_b(b), P32));
  }
  CHECK_THROWS_AS(tau_micro_oracle(TriVector::unit(4, 1), tol), PreconditionError);
}

TEST_CASE("sandwich on random micro instances") {
  const Rational tol(1, 1000);
  for (std::uint64_t t = 0; t < 15; ++t) {
    auto rng = trial_stream(4, "unit-sandwich", t);
    const TriVector x = micro_instance(rng);
    const LowerBound lo = tau_lower(x);
    const UpperBound up = tau_upper(x);
    const GaugeInterval g = tau_micro_oracle(x, tol);
    CHECK(lo.lo <= g.lo);
    CHECK(g.lo <= g.hi);
    CHECK(g.hi <= up.hi);
    CHECK(g.hi - g.lo <= tol);
    CHECK(g.upper.certifies(x, P32));
  }
}

TEST_CASE("homogeneity and solidity") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    auto rng = trial_stream(6, "unit-homog", t);
    const TriVector x = micro_instance(rng);
    const Rational c = ratio(uniform_int(rng, 1, 9), uniform_int(rng, 1, 9));
    const UpperBound u = tau_upper(x);
    VCertificate scaled = u.cert;
    scaled.scale *= c;
    CHECK(scaled.certifies(c * x, P32));
    CHECK(tau_upper(c * x).hi <= c * u.hi);
    CHECK(tau_lower(c * x).lo == c * tau_lower(x).lo);

    // any y dominated by x is certified by x's certificate
    TriVector y;
    for (const auto& [pt, v] : x.entries())
      if (uniform_int(rng, 0, 1)) y.set(pt, v * Rational(1, 2));
    CHECK(u.cert.certifies(y, P32));
    CHECK(tau_upper(y).hi <= u.hi);
  }
}

TEST_CASE("quotient witness examples") {
  std::vector<Rational> e1{1};
  const QuotientWitness w1 = quotient_witness(e1);
  CHECK(w1.branch == 1);
  CHECK(w1.y == TriVector::unit(1, 1));
  CHECK(w1.pairing == 1);
  CHECK(check_quotient_witness(w1, e1, P32));

  std::vector<Rational> e5{0, 0, 0, 0, 1};
  const QuotientWitness w5 = quotient_witness(e5);
  CHECK(w5.branch == 2);
  CHECK(w5.y == TriVector::row_ones(5));
  CHECK(w5.pairing == 1);
  CHECK(check_quotient_witness(w5, e5, P32));

  std::vector<Rational> b{Rational(3, 5), Rational(4, 5)};
  const QuotientWitness w = quotient_witness(b);
  CHECK(w.branch == 1);
  CHECK(w.y == TriVector::row_ones(2));
  CHECK(w.pairing == Rational(4, 5));

  std::vector<Rational> neg{Rational(-3, 5), 0, 0, 0, 0, Rational(-4, 5)};
  const QuotientWitness wn = quotient_witness(neg);
  CHECK(wn.pairing >= Rational(2, 9));
  CHECK(check_quotient_witness(wn, neg, P32));

  std::vector<Rational> bad{Rational(1, 2)};
  CHECK_THROWS_AS(quotient_witness(bad), PreconditionError);
}

TEST_CASE("quotient witness on random unit b") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    auto rng = trial_stream(12, "unit-quotient", t);
    const auto b = random_unit_b(rng, 1 + t % 12, 9, t % 3 ? 1.0 : 0.4);
    Rational s = 0;
    for (const auto& x : b) s += x * x;
    REQUIRE(s == 1);
    const QuotientWitness w = quotient_witness(b);
    CHECK(w.pairing >= Rational(2, 9));
    CHECK(check_quotient_witness(w, b, P32));
    CHECK(z_pair(w.y, b) == w.pairing);
  }
}

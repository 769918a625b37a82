#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hcgibbs/solvers.hpp"
#include "oracles.hpp"

using namespace hcgibbs;

namespace {

PadicNumber q(long num, long den, Prime p) {
  return PadicNumber::from_rational(mpz_class(num), mpz_class(den), p);
}

ModelParams model(long num, long den, Prime p, int k = 2) {
  return ModelParams(EpElement(q(num, den, p)), k);
}

ModelParams model_at(const mpz_class& lambda, Prime p, int k = 2) {
  return ModelParams(EpElement(PadicNumber::from_integer(lambda, p)), k);
}

// lambda = 1 + c p^j, c over residues, j = 1..6.
std::vector<mpz_class> region_samples(Prime p, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> c(1, p * p - 1);
  std::uniform_int_distribution<long> j(1, 6);
  std::vector<mpz_class> out;
  while (out.size() < count) {
    unsigned cc = c(rng);
    if (cc % p == 0) continue;
    out.push_back(1 + cc * padic::prime_power(p, j(rng)));
  }
  return out;
}

// Residue of z mod p^e, a p-integral element.
unsigned long res(const PadicNumber& z, long e) { return z.residue(e).get_ui(); }

}  // namespace

TEST_CASE("uniqueness_precheck") {
  CHECK(uniqueness_precheck(7, 3) == Precheck::Unique);
  CHECK(uniqueness_precheck(5, 3) == Precheck::Undetermined);
  CHECK(uniqueness_precheck(2, 4) == Precheck::Unique);
  CHECK(uniqueness_precheck(2, 6) == Precheck::Undetermined);
  for (Prime p : {2u, 3u, 5u, 7u, 13u}) CHECK(uniqueness_precheck(p, 2) == Precheck::Undetermined);
}

TEST_CASE("diagonal solver") {
  auto trivial = solve_ti_diagonal(model(1, 1, 5));
  REQUIRE(trivial.z1.is_exact());
  CHECK(*trivial.z1.exact_value() == 1);
  CHECK(trivial.solves);
  CHECK(trivial.residual.is_zero());

  for (auto [lambda, p] : {std::pair{6L, 5u}, {50L, 7u}}) {
    auto m = model(lambda, 1, p);
    auto t = solve_ti_diagonal(m);
    CHECK(t.solves);
    CHECK(res(t.z1, 1) == 1);
    // Brute force: the unique t = 1 mod p with 4t^3 = lambda (t + 1)^2 mod p^3.
    const unsigned long mod = p * p * p;
    long found = -1;
    int count = 0;
    for (unsigned long x = 1; x < mod; x += p) {
      mpz_class f = 4 * mpz_class(x) * x * x - lambda * mpz_class(x + 1) * (x + 1);
      if (f % mod == 0) {
        found = static_cast<long>(x);
        ++count;
      }
    }
    CHECK(count == 1);
    CHECK(static_cast<long>(res(t.z1, 3)) == found);

    auto t2 = solve_ti_diagonal(m, q(1 + p, 1, p));
    CHECK(padic::agree(t.z1.with_precision(56), t2.z1.with_precision(56)));
    CHECK(verify_compatibility(t.law(), m, 2).passed);
  }

  // p = 2 needs lambda = 1 mod 32 at k = 2.
  auto t = solve_ti_diagonal(model(33, 1, 2));
  CHECK(t.solves);
  CHECK_THROWS_AS(solve_ti_diagonal(model(5, 1, 2)), MethodNotApplicable);
  // Order k = 3 at p = 7 and k = 4 at p = 2.
  CHECK(solve_ti_diagonal(model(8, 1, 7, 3)).solves);
  CHECK(solve_ti_diagonal(model(1, 1, 2, 4)).solves);
}

TEST_CASE("off-diagonal solver") {
  CHECK_FALSE(solve_ti_offdiagonal(model(1, 1, 5)).has_value());
  CHECK_FALSE(solve_ti_offdiagonal(model(6, 1, 5)).has_value());
  CHECK_THROWS_AS(solve_ti_offdiagonal(model(1, 1, 3)), MethodNotApplicable);
  CHECK_THROWS_AS(solve_ti_offdiagonal(model(1, 1, 7, 3)), MethodNotApplicable);

  auto m = model(91, 16, 5);
  auto pair = solve_ti_offdiagonal(m);
  REQUIRE(pair.has_value());
  const auto& zp = pair->plus_minus.z1;
  const auto& zm = pair->plus_minus.z2;
  CHECK(pair->plus_minus.solves);
  CHECK(padic::in_Ep(zp));
  CHECK(padic::in_Ep(zm));
  CHECK_FALSE(padic::agree(zp, zm));
  CHECK(padic::agree(pair->minus_plus.z1, zm));
  CHECK(padic::agree(zp * zm, q(1, 1, 5)));

  // z_i (z_1 + z_2)^2 = lambda (1 + z_i)^2 mod 5^6 on the residues alone.
  const unsigned long mod = 15625;
  const mpz_class a = res(zp, 6), b = res(zm, 6);
  const mpz_class l = oracle::rational_residue(mpq_class(91, 16), 5, 6);
  for (const mpz_class& z : {a, b}) {
    mpz_class lhs = z * (a + b) * (a + b) - l * (1 + z) * (1 + z);
    CHECK(lhs % mod == 0);
  }
  CHECK(verify_compatibility(pair->plus_minus.law(), m, 2).passed);
  CHECK(verify_compatibility(pair->minus_plus.law(), m, 2).passed);
}

TEST_CASE("lambda region") {
  CHECK(lambda_region_ti(EpElement(q(91, 16, 5))));
  CHECK_FALSE(lambda_region_ti(EpElement(q(6, 1, 5))));
  CHECK(lambda_region_ti(EpElement(q(51, 1, 5))));
  CHECK_FALSE(lambda_region_ti(EpElement(q(1 + 2 * 125, 1, 5))));
  CHECK_FALSE(lambda_region_ti(EpElement(q(1, 1, 7))));
  CHECK_THROWS_AS(lambda_region_ti(EpElement(q(1, 1, 3))), std::invalid_argument);

  for (Prime p : {5u, 7u, 13u}) {
    for (const auto& lambda : region_samples(p, 60, p)) {
      auto m = model_at(lambda, p);
      // Legendre-symbol oracle on 16(lambda - 1) = 16 c p^j.
      mpz_class y = 16 * (lambda - 1);
      long v = padic::valuation_of(y, p);
      mpz_class unit = y / padic::prime_power(p, v);
      mpz_class digit = unit % p * oracle::brute_force_quotient(1, 3, p) % p;
      if (digit < 0) digit += p;
      bool expected = v % 2 == 0 && oracle::is_square_mod(digit.get_ui(), p);
      CHECK(lambda_region_ti(EpElement(m.lambda())) == expected);
      CHECK(lambda_region_ti(EpElement(m.lambda())) == solve_ti_offdiagonal(m).has_value());
    }
  }
}

TEST_CASE("classify_ti") {
  auto three = classify_ti(model(91, 16, 5));
  CHECK(three.verdict == TIVerdict::ThreeTI);
  CHECK(three.witnesses.size() == 3);
  CHECK(three.note.empty());
  for (const auto& w : three.witnesses) CHECK(w.solves);

  auto one = classify_ti(model(6, 1, 5));
  CHECK(one.verdict == TIVerdict::Unique);
  CHECK(one.witnesses.size() == 1);
  CHECK(classify_ti(model(1, 1, 7)).verdict == TIVerdict::Unique);

  auto pre = classify_ti(model(1, 1, 7, 3));
  CHECK(pre.verdict == TIVerdict::Unique);
  CHECK_FALSE(pre.region.has_value());
  CHECK(classify_ti(model(1, 1, 3)).verdict == TIVerdict::Unknown);
  auto no_lift = classify_ti(model(5, 1, 2));
  CHECK(no_lift.verdict == TIVerdict::Unknown);
  CHECK(no_lift.witnesses.empty());
  CHECK_FALSE(no_lift.note.empty());
}

TEST_CASE("sqrt(1 - lambda) region") {
  CHECK(sqrt_one_minus_lambda_region(EpElement(q(-24, 1, 5))));
  CHECK(sqrt_one_minus_lambda_region(EpElement(q(-3, 1, 2))));
  CHECK_FALSE(sqrt_one_minus_lambda_region(EpElement(q(51, 1, 5))));
  CHECK_FALSE(sqrt_one_minus_lambda_region(EpElement(q(1, 1, 5))));
  CHECK_FALSE(sqrt_one_minus_lambda_region(EpElement(q(6, 1, 5))));

  for (Prime p : {2u, 5u, 7u, 13u}) {
    for (const auto& lambda : region_samples(p, 60, 100 + p)) {
      auto x = PadicNumber::from_integer(lambda, p);
      if (!padic::in_Ep(x)) continue;
      EpElement l(x);
      CHECK(sqrt_one_minus_lambda_region(l) == sqrt_one_minus_lambda_exists(l));
    }
  }
}

TEST_CASE("periodic solutions") {
  struct Case {
    long lambda;
    Prime p;
    mpq_class plus, minus;
  };
  for (const auto& c : {Case{-24, 5, mpq_class(-3, 2), mpq_class(-2, 3)},
                        Case{-3, 2, mpq_class(-3), mpq_class(-1, 3)}}) {
    auto m = model(c.lambda, 1, c.p);
    auto sol = solve_periodic(m);
    REQUIRE(sol.has_value());
    REQUIRE(sol->plus.is_exact());
    CHECK(*sol->plus.exact_value() == c.plus);
    CHECK(*sol->minus.exact_value() == c.minus);
    // Roots of lambda z^2 - 2(2 - lambda) z + lambda over Q.
    for (const auto& z : {c.plus, c.minus}) {
      CHECK(c.lambda * z * z - 2 * (2 - c.lambda) * z + c.lambda == 0);
    }
    CHECK(*(sol->plus * sol->minus).exact_value() == 1);
    CHECK(*(period_map(m, sol->plus)).exact_value() == c.minus);
    CHECK(*(period_map(m, sol->minus)).exact_value() == c.plus);

    auto r = verify_per_system(*sol, m);
    CHECK(r.passed);
    CHECK(r.max_residual.is_zero());
    CHECK(verify_compatibility(sol->law(), m, 3).passed);
    CHECK(verify_compatibility(sol->swapped_law(), m, 3).passed);
  }
  auto r = verify_per_system(*solve_periodic(model(-24, 1, 5)), model(-24, 1, 5));
  CHECK(r.slack == Norm::exact(5, -1));

  auto m = model(6, 1, 5);
  auto t = solve_ti_diagonal(m);
  auto rejected = verify_per_system(m, {t.z1, t.z2}, {t.z1, t.z2});
  CHECK(rejected.equations_hold);
  CHECK_FALSE(rejected.distinct);
  CHECK_FALSE(rejected.passed);

  CHECK_FALSE(solve_periodic(model(1, 1, 5)).has_value());
  CHECK_FALSE(solve_periodic(model(6, 1, 5)).has_value());
  CHECK_THROWS_AS(solve_periodic(model(1, 1, 5, 3)), MethodNotApplicable);

  // Sampled periodic laws: Vieta and the two-cycle.
  for (Prime p : {5u, 7u, 13u}) {
    for (const auto& lambda : region_samples(p, 40, 7 * p)) {
      auto mm = model_at(lambda, p);
      auto s = solve_periodic(mm);
      if (!s) continue;
      CHECK(padic::agree(s->plus * s->minus, PadicNumber::from_integer(1, p)));
      CHECK(padic::agree(mm.lambda() * (s->plus + s->minus),
                         PadicNumber::from_integer(2, p) * (PadicNumber::from_integer(2, p) - mm.lambda())));
      CHECK(padic::agree(period_map(mm, period_map(mm, s->plus)), s->plus));
      CHECK(verify_per_system(*s, mm).passed);
    }
  }
}

TEST_CASE("F injectivity") {
  auto z = F_map(q(1, 1, 5), q(6, 1, 5));
  auto t = F_map(q(6, 1, 5), q(1, 1, 5));
  CHECK_FALSE(padic::agree(z.first, t.first));
  auto same = F_map(q(1, 1, 5), q(6, 1, 5));
  CHECK(padic::agree(z.first, same.first));
  auto back = F_inverse(z.first, z.second);
  CHECK(*back.first.exact_value() == 1);
  CHECK(*back.second.exact_value() == 6);

  for (Prime p : {2u, 5u, 7u, 13u}) {
    auto r = F_injectivity_check(100, p, 42);
    CHECK(r.samples == 100);
    CHECK(r.counterexamples == 0);
    CHECK(r.inverse_failures == 0);
    CHECK(r.passed);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gmpxx.h>

#include "hcgibbs/gibbs.hpp"

using namespace hcgibbs;

namespace {

PadicNumber q(long num, long den, Prime p) {
  return PadicNumber::from_rational(mpz_class(num), mpz_class(den), p);
}

ModelParams model(long num, long den, Prime p, int k) {
  return ModelParams(padic::EpElement(q(num, den, p)), k);
}

BoundaryLaw periodic(long a_num, long a_den, long b_num, long b_den, Prime p) {
  return BoundaryLaw::period_two({q(a_num, a_den, p), q(a_num, a_den, p)},
                                 {q(b_num, b_den, p), q(b_num, b_den, p)});
}

// Z_n over Q for a law with z'_1 = z'_2 = z on level n, gauge 1, summing
// over all 3^|V_n| maps filtered by the edge rule.
mpq_class rational_partition(const TreeLayout& t, const mpq_class& lambda, const mpq_class& z) {
  const std::size_t size = t.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < size; ++i) total *= 3;
  const Vertex first = t.sphere(t.depth()).front();
  mpq_class sum = 0;
  std::vector<int> s(size);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < size; ++i, c /= 3) s[i] = static_cast<int>(c % 3);
    bool ok = true;
    for (Vertex x = 1; x < size && ok; ++x) {
      int e = s[x] + s[*t.parent(x)];
      ok = e != 0 && e != 3;
    }
    if (!ok) continue;
    mpq_class w = 1;
    for (Vertex x = 0; x < size; ++x) {
      if (s[x] != 0) w *= lambda;
      if (x >= first && s[x] != 0) w *= z / lambda;
    }
    sum += w;
  }
  return sum;
}

}  // namespace

TEST_CASE("trivial law counts admissible configurations") {
  for (Prime p : {2u, 3u, 5u}) {
    auto m = model(1, 1, p, 2);
    auto b = BoundaryLaw::translation_invariant(q(1, 1, p), q(1, 1, p));
    CHECK(verify_compatibility(b, m, 3).passed);
    auto z = partition_function(m, b, 2);
    REQUIRE(z.is_exact());
    CHECK(*z.exact_value() == mpq_class(enumerate_admissible(TreeLayout::build(2, 2)).size()));
    CHECK(*z.exact_value() == 1536);
  }
}

TEST_CASE("partition function against rational enumeration") {
  struct Case {
    Prime p;
    long lambda;
    mpq_class even, odd;
  };
  for (const auto& c : {Case{5, -24, mpq_class(-3, 2), mpq_class(-2, 3)},
                        Case{2, -3, mpq_class(-3), mpq_class(-1, 3)}}) {
    auto m = model(c.lambda, 1, c.p, 2);
    auto b = BoundaryLaw::period_two(
        {PadicNumber::from_rational(c.even, c.p), PadicNumber::from_rational(c.even, c.p)},
        {PadicNumber::from_rational(c.odd, c.p), PadicNumber::from_rational(c.odd, c.p)});
    for (int n : {1, 2}) {
      auto t = TreeLayout::build(2, n);
      auto z = partition_function(m, b, n);
      REQUIRE(z.is_exact());
      CHECK(*z.exact_value() == rational_partition(t, c.lambda, n % 2 ? c.odd : c.even));
    }
  }
}

TEST_CASE("root value follows from its children") {
  auto m = model(-24, 1, 5, 2);
  auto b = periodic(-3, 2, -2, 3, 5);
  auto values = b.tabulate(TreeLayout::build(2, 1), m);
  // lambda ((1 + z)/(2z))^3 with z = -2/3
  mpq_class expected = mpq_class(-24) * mpq_class(-1, 64);
  CHECK(*values[0].z1.exact_value() == expected);
  CHECK(*values[1].z1.exact_value() == mpq_class(-2, 3));
  CHECK(verify_compatibility(b, m, 3).passed);
}

TEST_CASE("consistency and its failure under perturbation") {
  auto m = model(-24, 1, 5, 2);
  auto b = periodic(-3, 2, -2, 3, 5);
  for (int n : {1, 2}) {
    auto r = check_consistency(m, b, n);
    CHECK(r.passed);
    CHECK(r.max_defect_norm.is_zero());
    CHECK(r.checked == enumerate_admissible(TreeLayout::build(2, n - 1)).size());
  }
  CHECK(check_consistency(m, b.swapped(), 2).passed);

  auto bad = perturbed(b, TreeLayout::build(2, 2), m);
  CHECK_FALSE(verify_compatibility(bad, m, 2).passed);
  auto r = check_consistency(m, bad, 2);
  CHECK_FALSE(r.passed);
  CHECK_FALSE(r.max_defect_norm.at_most(-3));
  CHECK_THROWS_AS(check_consistency(m, b, 0), std::invalid_argument);
}

TEST_CASE("measure sums to one") {
  auto m = model(-24, 1, 5, 2);
  auto b = periodic(-3, 2, -2, 3, 5);
  auto t = TreeLayout::build(2, 1);
  PadicNumber total = PadicNumber::exact_zero(5);
  for (const auto& c : enumerate_admissible(t)) total += measure(c, m, b).value;
  CHECK(*total.exact_value() == 1);
  CHECK_THROWS_AS(unnormalized_weight(Configuration::parse(t, "0000"), m, b),
                  std::invalid_argument);
}

TEST_CASE("hamiltonian") {
  auto t = TreeLayout::build(2, 1);
  auto trivial = model(1, 1, 5, 2);
  CHECK(hamiltonian(Configuration::parse(t, "1111"), trivial).is_exact_zero());
  auto m = model(6, 1, 5, 2);
  auto h = hamiltonian(Configuration::parse(t, "0112"), m);
  CHECK(padic::agree(h, q(3, 1, 5) * padic::log_p(q(6, 1, 5))));
  CHECK(hamiltonian(Configuration::parse(t, "0222"), m).valuation() == 1);
}

TEST_CASE("partition recursion") {
  for (auto [p, lambda, a, bden, c, d] :
       {std::tuple{5u, -24L, -3L, 2L, -2L, 3L}, std::tuple{2u, -3L, -3L, 1L, -1L, 3L}}) {
    auto m = model(lambda, 1, p, 2);
    auto b = periodic(a, bden, c, d, p);
    for (int n : {0, 1}) {
      auto r = verify_partition_recursion(m, b, n);
      CHECK(r.passed);
      CHECK(r.difference_norm.is_zero());
    }
  }
  auto m = model(-24, 1, 5, 2);
  auto t = TreeLayout::build(2, 2);
  auto b = periodic(-3, 2, -2, 3, 5);
  // Product of z'_1 + z'_2 over the children; the root has three.
  CHECK(*local_factor(b, m, t, 0).exact_value() == mpq_class(-64, 27));
  CHECK(*local_factor(b, m, t, 1).exact_value() == 9);
  CHECK_THROWS_AS(local_factor(perturbed(b, t, m), m, t, 1), padic::DomainError);
}

TEST_CASE("gauge does not change the measure") {
  auto m = model(-24, 1, 5, 2);
  auto b = periodic(-3, 2, -2, 3, 5);
  std::vector<PadicNumber> gauge;
  for (long i = 0; i < 10; ++i) gauge.push_back(q(1 + 5 * i, 1, 5));
  auto g = b.with_gauge(gauge);
  auto t = TreeLayout::build(2, 2);
  const auto zb = partition_function(m, b, 2);
  const auto zg = partition_function(m, g, 2);
  for (const auto& c : enumerate_admissible(t)) {
    CHECK(unnormalized_weight(c, m, b) / zb == unnormalized_weight(c, m, g) / zg);
  }
  auto t1 = TreeLayout::build(2, 1);
  for (const auto& c : enumerate_admissible(t1)) {
    CHECK(measure(c, m, b).value == measure(c, m, g).value);
  }
  CHECK(verify_partition_recursion(m, g, 1).passed);
}

TEST_CASE("boundedness norms") {
  auto m5 = model(-24, 1, 5, 2);
  for (int n : {0, 1, 2}) {
    auto r = boundedness_norms(m5, periodic(-3, 2, -2, 3, 5), n);
    CHECK(r.bounded);
    CHECK(r.znorm == Norm::exact(5, 0));
    CHECK(r.common_munorm);
    CHECK(r.matches_prediction);
  }

  // 1536 = 3 * 2^9 admissible configurations for k = 2, n = 2.
  auto m2 = model(1, 1, 2, 2);
  auto trivial = BoundaryLaw::translation_invariant(q(1, 1, 2), q(1, 1, 2));
  auto r = boundedness_norms(m2, trivial, 2);
  CHECK_FALSE(r.bounded);
  CHECK(r.znorm == Norm::exact(2, -9));
  CHECK(r.munorm == Norm::exact(2, 9));
  CHECK(r.predicted_znorm == Norm::exact(2, -8));

  // Beyond the enumeration cap the recursion product is used.
  auto big = boundedness_norms(m2, trivial, 2, 4);
  CHECK(big.znorm == r.znorm);
  CHECK(big.munorm == r.munorm);

  CHECK_THROWS_AS(boundedness_norms(m5, perturbed(periodic(-3, 2, -2, 3, 5),
                                                  TreeLayout::build(2, 2), m5),
                                    2),
                  padic::DomainError);
}

TEST_CASE("transition") {
  auto m5 = model(-24, 1, 5, 2);
  auto b = periodic(-3, 2, -2, 3, 5);
  std::vector<BoundaryLaw> none, one{b}, two{b, b.swapped()};
  CHECK(detect_transition(m5, none, two) == Transition::Quasi);
  CHECK(detect_transition(m5, none, one) == Transition::None);
  auto m2 = model(-3, 1, 2, 2);
  CHECK(detect_transition(m2, none, two) == Transition::None);
  CHECK(std::string(to_string(Transition::Quasi)) == "quasi");
}

#include "hcgibbs/solvers.hpp"

#include <random>

namespace hcgibbs {

namespace {

PadicNumber constant(long n, const ModelParams& m) {
  return PadicNumber::from_integer(n, m.prime(), m.precision());
}

Norm min_norm(const Norm& a, const Norm& b) { return padic::max_norm(a, b) == a ? b : a; }

/// The square root of a whose first digit is r mod p.
std::optional<PadicNumber> root_with_residue(const PadicNumber& a, long r) {
  auto roots = padic::sqrt(a);
  if (!roots) return std::nullopt;
  const mpz_class p = a.prime();
  mpz_class target = r % p;
  if (target < 0) target += p;
  if (roots->first.residue(1) == target) return roots->first;
  if (roots->second.residue(1) == target) return roots->second;
  throw std::logic_error("no square root branch with the requested residue");
}

void require_offdiagonal_case(const ModelParams& m) {
  if (m.order() != 2 || m.prime() <= 3) {
    throw MethodNotApplicable("off-diagonal TI solutions are constructed for k = 2, p > 3 only");
  }
}

}  // namespace

Precheck uniqueness_precheck(Prime p, int k) {
  if (p == 2) return k % 4 == 0 ? Precheck::Unique : Precheck::Undetermined;
  const long long d = static_cast<long long>(k) * k - 4;
  return d % static_cast<long long>(p) != 0 ? Precheck::Unique : Precheck::Undetermined;
}

std::pair<PadicNumber, PadicNumber> wand_residual(const ModelParams& m, const PadicNumber& z1,
                                                  const PadicNumber& z2) {
  const PadicNumber one = constant(1, m);
  const PadicNumber sum = z1 + z2;
  const auto k = static_cast<unsigned>(m.order());
  return {z1 - m.lambda() * padic::pow((one + z1) / sum, k),
          z2 - m.lambda() * padic::pow((one + z2) / sum, k)};
}

Norm wand_residual_norm(const ModelParams& m, const PadicNumber& z1, const PadicNumber& z2) {
  auto [r1, r2] = wand_residual(m, z1, z2);
  return padic::max_norm(r1.norm(), r2.norm());
}

namespace {

TISolution checked_solution(const ModelParams& m, const PadicNumber& z1, const PadicNumber& z2) {
  auto [r1, r2] = wand_residual(m, z1, z2);
  return {z1, z2, padic::max_norm(r1.norm(), r2.norm()), r1.is_zero() && r2.is_zero()};
}

}  // namespace

TISolution solve_ti_diagonal(const ModelParams& m, const std::optional<PadicNumber>& seed) {
  const unsigned k = static_cast<unsigned>(m.order());
  std::vector<PadicNumber> coeffs;
  for (unsigned i = 0; i <= k; ++i) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), k, i);
    coeffs.push_back(-(m.lambda() * PadicNumber::from_integer(binom, m.prime(), m.precision())));
  }
  coeffs.push_back(PadicNumber::from_integer(mpz_class(1) << k, m.prime(), m.precision()));

  const PadicNumber start = seed.value_or(constant(1, m));
  PadicNumber t = start;
  try {
    t = padic::hensel_lift(coeffs, start);
  } catch (const padic::DomainError& e) {
    throw MethodNotApplicable(std::string("diagonal solver: ") + e.what());
  }
  if (!padic::in_Ep(t)) {
    throw MethodNotApplicable("diagonal solver: lifted root " + t.str() + " is outside E_p");
  }
  return checked_solution(m, t, t);
}

std::optional<OffDiagonalPair> solve_ti_offdiagonal(const ModelParams& m) {
  require_offdiagonal_case(m);
  const PadicNumber& lambda = m.lambda();
  const PadicNumber s1 = *root_with_residue(lambda, 1);
  const PadicNumber s2 = *root_with_residue(lambda + constant(8, m), 3);
  const PadicNumber d = constant(2, m) * (lambda - constant(4, m) + s1 * s2);
  if (d.is_zero()) return std::nullopt;
  auto sqrt_d = padic::sqrt(d);
  if (!sqrt_d) return std::nullopt;

  const PadicNumber w = s1 + s2;
  const PadicNumber eight = constant(8, m);
  const PadicNumber two_s1 = constant(2, m) * s1;
  const PadicNumber zp = w * (two_s1 + sqrt_d->first) / eight;
  const PadicNumber zm = w * (two_s1 - sqrt_d->first) / eight;
  if (!padic::in_Ep(zp) || !padic::in_Ep(zm)) {
    throw std::logic_error("off-diagonal solution outside E_p");
  }
  OffDiagonalPair out{checked_solution(m, zp, zm), checked_solution(m, zm, zp)};
  if (!out.plus_minus.solves || !out.minus_plus.solves) {
    throw std::logic_error("off-diagonal solution fails the fixed-point equation");
  }
  return out;
}

bool lambda_region_ti(const EpElement& lambda) {
  const PadicNumber& x = lambda.value();
  const Prime p = x.prime();
  if (p <= 3) throw std::invalid_argument("region predicate needs p > 3");
  const int n = x.precision();
  const PadicNumber y =
      PadicNumber::from_integer(16, p, n) * (x - PadicNumber::from_integer(1, p, n));
  if (y.is_zero() || y.valuation() % 2 != 0) return false;
  const mpz_class three_inv = PadicNumber::from_rational(mpz_class(1), mpz_class(3), p, 1).unit();
  return padic::is_quadratic_residue(mpz_class(y.digits().front()) * three_inv, p);
}

TIClassification classify_ti(const ModelParams& m) {
  TIClassification c;
  c.precheck = uniqueness_precheck(m.prime(), m.order());
  if (m.order() == 2 && m.prime() > 3) {
    c.region = lambda_region_ti(EpElement(m.lambda()));
    c.witnesses.push_back(solve_ti_diagonal(m));
    auto pair = solve_ti_offdiagonal(m);
    if (pair.has_value() != *c.region) {
      c.note = "region predicate disagrees with squareness of D; using the direct test";
    }
    if (pair) {
      c.witnesses.push_back(pair->plus_minus);
      c.witnesses.push_back(pair->minus_plus);
      c.verdict = TIVerdict::ThreeTI;
    } else {
      c.verdict = TIVerdict::Unique;
    }
    return c;
  }
  try {
    c.witnesses.push_back(solve_ti_diagonal(m));
  } catch (const MethodNotApplicable& e) {
    c.note = e.what();
  }
  c.verdict = c.precheck == Precheck::Unique ? TIVerdict::Unique : TIVerdict::Unknown;
  return c;
}

bool sqrt_one_minus_lambda_region(const EpElement& lambda) {
  const PadicNumber& l = lambda.value();
  const Prime p = l.prime();
  const PadicNumber x = PadicNumber::from_integer(1, p, l.precision()) - l;
  if (x.is_zero() || x.valuation() % 2 != 0) return false;
  const auto digits = x.digits();
  if (p == 2) {
    if (digits.size() < 3) {
      throw padic::PrecisionError("1 - lambda: three digits needed, " +
                                  std::to_string(digits.size()) + " known");
    }
    return digits[1] == 0 && digits[2] == 0;
  }
  return padic::is_quadratic_residue(digits.front(), p);
}

bool sqrt_one_minus_lambda_exists(const EpElement& lambda) {
  const PadicNumber& l = lambda.value();
  const PadicNumber x = PadicNumber::from_integer(1, l.prime(), l.precision()) - l;
  return !x.is_zero() && padic::sqrt(x).has_value();
}

PadicNumber period_map(const ModelParams& m, const PadicNumber& z) {
  const PadicNumber r = (constant(1, m) + z) / (constant(2, m) * z);
  return m.lambda() * r * r;
}

BoundaryLaw PeriodicSolution::law() const {
  return BoundaryLaw::period_two({plus, plus}, {minus, minus});
}

BoundaryLaw PeriodicSolution::swapped_law() const {
  return BoundaryLaw::period_two({minus, minus}, {plus, plus});
}

std::optional<PeriodicSolution> solve_periodic(const ModelParams& m) {
  if (m.order() != 2) throw MethodNotApplicable("period-two solutions are constructed for k = 2");
  if (!sqrt_one_minus_lambda_region(EpElement(m.lambda()))) return std::nullopt;
  const PadicNumber& lambda = m.lambda();
  const PadicNumber two = constant(2, m);
  const PadicNumber r = padic::sqrt(constant(1, m) - lambda)->first;
  PeriodicSolution sol{(two - lambda + two * r) / lambda, (two - lambda - two * r) / lambda};
  if (!padic::in_Ep(sol.plus) || !padic::in_Ep(sol.minus)) {
    throw std::logic_error("periodic solution outside E_p");
  }
  const PadicNumber image = period_map(m, sol.plus);
  if (!padic::agree(image, sol.minus) || padic::agree(image, sol.plus)) {
    throw std::logic_error("periodic solution is not a two-cycle of f");
  }
  return sol;
}

PerSystemReport verify_per_system(const ModelParams& m,
                                  const std::pair<PadicNumber, PadicNumber>& z,
                                  const std::pair<PadicNumber, PadicNumber>& t) {
  const PadicNumber one = constant(1, m);
  const auto k = static_cast<unsigned>(m.order());
  auto image = [&](const PadicNumber& a, const std::pair<PadicNumber, PadicNumber>& s) {
    return m.lambda() * padic::pow((one + a) / (s.first + s.second), k);
  };
  const std::array<PadicNumber, 4> residuals{
      z.first - image(t.first, t), z.second - image(t.second, t),
      t.first - image(z.first, z), t.second - image(z.second, z)};

  PerSystemReport r;
  r.max_residual = Norm::zero(m.prime());
  r.equations_hold = true;
  for (std::size_t i = 0; i < 4; ++i) {
    r.residuals[i] = residuals[i].norm();
    r.max_residual = padic::max_norm(r.max_residual, r.residuals[i]);
    r.equations_hold = r.equations_hold && residuals[i].is_zero();
  }
  const PadicNumber d1 = z.first - t.first;
  const PadicNumber d2 = z.second - t.second;
  r.slack = min_norm(d1.norm(), d2.norm());
  r.distinct = !d1.is_zero() && !d2.is_zero();
  r.passed = r.equations_hold && r.distinct;
  return r;
}

PerSystemReport verify_per_system(const PeriodicSolution& sol, const ModelParams& m) {
  return verify_per_system(m, {sol.plus, sol.plus}, {sol.minus, sol.minus});
}

std::pair<PadicNumber, PadicNumber> F_map(const PadicNumber& z1, const PadicNumber& z2) {
  const PadicNumber one = PadicNumber::from_integer(1, z1.prime(), z1.precision());
  const PadicNumber sum = z1 + z2;
  return {(one + z1) / sum, (one + z2) / sum};
}

std::pair<PadicNumber, PadicNumber> F_inverse(const PadicNumber& a1, const PadicNumber& a2) {
  const PadicNumber one = PadicNumber::from_integer(1, a1.prime(), a1.precision());
  const PadicNumber s = PadicNumber::from_integer(2, a1.prime(), a1.precision()) / (a1 + a2 - one);
  return {a1 * s - one, a2 * s - one};
}

InjectivityReport F_injectivity_check(std::size_t samples, Prime p, std::uint64_t seed,
                                      int precision) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> digit(0, p - 1);
  const long shift = padic::exp_convergence_valuation(p);

  auto random_ep = [&] {
    mpz_class n = 0;
    for (int i = 0; i < precision - shift; ++i) n = n * p + digit(rng);
    return PadicNumber::from_integer(1 + padic::prime_power(p, shift) * n, p, precision)
        .approximation();
  };
  // Half the pairs differ only from digit j onwards, so F has to resolve
  // nearby points too.
  std::uniform_int_distribution<long> depth(shift, precision - 10);
  auto nudge = [&](const PadicNumber& x) {
    mpz_class c = 1 + digit(rng);
    return x + PadicNumber::from_integer(c * padic::prime_power(p, depth(rng)), p, precision);
  };

  InjectivityReport r;
  r.prime = p;
  const auto same = [](const auto& a, const auto& b) {
    return padic::agree(a.first, b.first) && padic::agree(a.second, b.second);
  };
  while (r.samples < samples) {
    const std::pair<PadicNumber, PadicNumber> z{random_ep(), random_ep()};
    std::pair<PadicNumber, PadicNumber> t =
        r.samples % 2 == 0 ? std::pair{random_ep(), random_ep()} : std::pair{nudge(z.first), z.second};
    if (r.samples % 4 == 3) std::swap(t.first, t.second);
    if (same(z, t)) continue;
    ++r.samples;
    const auto fz = F_map(z.first, z.second);
    const auto ft = F_map(t.first, t.second);
    if (same(fz, ft)) ++r.counterexamples;
    if (!same(F_inverse(fz.first, fz.second), z)) ++r.inverse_failures;
  }
  r.passed = r.counterexamples == 0 && r.inverse_failures == 0;
  return r;
}

const char* to_string(Precheck v) { return v == Precheck::Unique ? "Unique" : "Undetermined"; }

const char* to_string(TIVerdict v) {
  switch (v) {
    case TIVerdict::Unique: return "Unique";
    case TIVerdict::ThreeTI: return "ThreeTI";
    case TIVerdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

}  // namespace hcgibbs

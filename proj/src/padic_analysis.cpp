// Square roots, Hensel lifting and the log/exp series.

#include <algorithm>

#include "hcgibbs/padic.hpp"

namespace padic {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1u) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1u;
  }
  return r;
}

mpz_class mod_positive(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class invert_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw DomainError("element is not invertible");
  }
  return r;
}

long valuation_or(const mpz_class& n, Prime p, long if_zero) {
  return n == 0 ? if_zero : valuation_of(n, p);
}

/// Integer representative of an integral p-adic value modulo p^m, using the
/// digits that are actually known (missing digits read as zero).
mpz_class integer_image(const PadicNumber& x, long m) {
  if (!x.is_nonzero()) return 0;
  if (x.valuation() >= m) return 0;
  long want = std::min<long>(m, x.absolute_precision()) - x.valuation();
  if (want <= 0) return 0;
  return x.residue(x.valuation() + want) % prime_power(x.prime(), m);
}

mpz_class horner(std::span<const mpz_class> c, const mpz_class& t, const mpz_class& modulus) {
  mpz_class acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = mod_positive(acc * t + c[i], modulus);
  return acc;
}

std::vector<mpz_class> derivative(std::span<const mpz_class> c) {
  std::vector<mpz_class> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<unsigned long>(i));
  return d;
}

bool is_perfect_square(const mpz_class& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

mpz_class isqrt(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

RootPair ordered_roots(PadicNumber r) {
  const Prime p = r.prime();
  mpz_class lead = r.unit() % (p == 2 ? 4 : p);
  bool canonical = p == 2 ? lead == 1 : lead <= (p - 1) / 2;
  PadicNumber other = -r;
  if (canonical) return {std::move(r), std::move(other)};
  return {std::move(other), std::move(r)};
}

}  // namespace

std::uint64_t sqrt_mod_prime(std::uint64_t a, Prime p) {
  a %= p;
  if (p == 2 || a == 0) return a;
  if (powmod(a, (p - 1) / 2, p) != 1) throw DomainError("not a quadratic residue");
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);

  std::uint64_t q = p - 1;
  unsigned s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;

  std::uint64_t m = s;
  std::uint64_t c = powmod(z, q, p);
  std::uint64_t t = powmod(a, q, p);
  std::uint64_t r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0;
    std::uint64_t tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

std::optional<RootPair> sqrt(const PadicNumber& a) {
  const Prime p = a.prime();
  if (a.is_exact_zero()) {
    return RootPair{a, a};
  }
  if (a.is_zero_to_precision()) {
    throw PrecisionError("square root of " + a.str() + " is undecidable");
  }
  const long v = a.valuation();
  if (v % 2 != 0) return std::nullopt;

  const long need = p == 2 ? 3 : 1;
  if (!a.is_exact() && a.precision() < need) {
    throw PrecisionError("not enough digits to decide squareness");
  }
  const mpz_class lead = a.unit() % (p == 2 ? 8 : p);
  if (p == 2 ? lead != 1 : !is_quadratic_residue(lead, p)) return std::nullopt;

  if (a.is_exact()) {
    const mpq_class& q = *a.exact_value();
    if (is_perfect_square(q.get_num()) && is_perfect_square(q.get_den())) {
      mpq_class root(isqrt(q.get_num()), isqrt(q.get_den()));
      return ordered_roots(PadicNumber::from_rational(root, p, a.precision()));
    }
  }

  // Lift a root of t^2 = u from its seed mod p (mod 8 for p = 2).
  const long digits = a.is_exact() ? a.precision() + (p == 2 ? 1 : 0) : a.precision();
  const mpz_class modulus = prime_power(p, digits);
  const mpz_class u = a.is_exact() ? a.with_precision(static_cast<int>(digits)).unit() : a.unit();
  mpz_class r;
  if (p == 2) {
    r = 1;
    for (long k = 3; k < digits; ++k) {
      mpz_class next = prime_power(2, k + 1);
      if (mod_positive(r * r - u, next) != 0) r += prime_power(2, k - 1);
    }
  } else {
    r = static_cast<unsigned long>(sqrt_mod_prime(mpz_class(u % p).get_ui(), p));
    for (int iter = 0; iter < 128; ++iter) {
      mpz_class f = mod_positive(r * r - u, modulus);
      if (f == 0) break;
      r = mod_positive(r - f * invert_mod(2 * r, modulus), modulus);
    }
    if (mod_positive(r * r - u, modulus) != 0) {
      throw std::logic_error("square root lifting failed to converge");
    }
  }
  const long rel = p == 2 ? digits - 1 : digits;
  return ordered_roots(PadicNumber::from_unit(p, v / 2, r, static_cast<int>(rel)));
}

PadicNumber hensel_lift(std::span<const PadicNumber> coeffs, const PadicNumber& a0) {
  if (coeffs.empty()) throw DomainError("hensel_lift: empty polynomial");
  const Prime p = a0.prime();
  long known = kInfinitePrecision;
  int cap = a0.precision();
  bool all_exact = a0.is_exact();
  for (const auto& c : coeffs) {
    if (c.prime() != p) throw PrimeMismatch("hensel_lift: coefficient prime mismatch");
    if (!c.is_integral()) throw DomainError("hensel_lift: coefficient with |c|_p > 1");
    known = std::min(known, c.absolute_precision());
    cap = std::max(cap, c.precision());
    all_exact = all_exact && c.is_exact();
  }
  if (!a0.is_integral()) throw DomainError("hensel_lift: seed with |a0|_p > 1");

  if (all_exact) {
    PadicNumber value = PadicNumber::exact_zero(p, cap);
    for (std::size_t i = coeffs.size(); i-- > 0;) value = value * a0 + coeffs[i];
    if (value.is_exact_zero()) return a0;
  }

  // Probe |F'(a0)| with generous room, then fix the working modulus.
  const long probe = (known == kInfinitePrecision ? cap : known) + 2;
  auto images = [&](long m) {
    std::vector<mpz_class> c;
    c.reserve(coeffs.size());
    for (const auto& x : coeffs) c.push_back(integer_image(x, m));
    return c;
  };
  {
    auto c = images(probe);
    auto dc = derivative(c);
    mpz_class modulus = prime_power(p, probe);
    mpz_class t = integer_image(a0, probe);
    mpz_class df = horner(dc, t, modulus);
    if (df == 0) throw DomainError("hensel_lift: F'(a0) vanishes to working precision");
  }
  auto c0 = images(probe);
  const mpz_class probe_mod = prime_power(p, probe);
  const mpz_class t0 = integer_image(a0, probe);
  const long vd = valuation_of(horner(derivative(c0), t0, probe_mod), p);
  const long vf = valuation_or(horner(c0, t0, probe_mod), p, probe);
  if (vf <= 2 * vd) {
    throw DomainError("hensel_lift: precondition |F(a0)|_p < |F'(a0)|_p^2 fails");
  }

  const long target = known == kInfinitePrecision ? cap : known - vd;
  if (target <= 0) {
    throw PrecisionError("hensel_lift: coefficients too imprecise to fix any digit");
  }
  const long m = target + vd + 1;
  const mpz_class modulus = prime_power(p, m);
  const auto c = images(m);
  const auto dc = derivative(c);
  mpz_class t = integer_image(a0, m);
  bool converged = false;
  for (int iter = 0; iter < 256; ++iter) {
    mpz_class f = horner(c, t, modulus);
    if (f == 0) {
      converged = true;
      break;
    }
    mpz_class df = horner(dc, t, modulus);
    mpz_class scale = prime_power(p, vd);
    mpz_class step = mod_positive((f / scale) * invert_mod(df / scale, modulus), modulus);
    t = mod_positive(t - step, modulus);
  }
  if (!converged) throw std::logic_error("hensel_lift: Newton iteration did not converge");
  return PadicNumber::from_residue(t, p, target, static_cast<int>(target));
}

PadicNumber log_p(const PadicNumber& x) {
  const Prime p = x.prime();
  PadicNumber y = x - PadicNumber::from_integer(1, p, x.precision());
  if (y.is_exact_zero()) return y;
  if (y.is_zero_to_precision()) {
    if (y.valuation() >= 1) return y;
    throw PrecisionError("log_p: cannot decide whether x lies in B(1,1)");
  }
  const long v = y.valuation();
  if (v < 1) throw DomainError("log_p: x = " + x.str() + " lies outside B(1,1)");

  const long target = y.is_exact() ? v + y.precision() : y.absolute_precision();
  PadicNumber step = y.is_exact() ? y.approximation() : y;
  PadicNumber power = step;
  PadicNumber sum = PadicNumber::exact_zero(p, x.precision());
  for (unsigned long n = 1;; ++n) {
    PadicNumber term = power / PadicNumber::from_integer(n, p, x.precision());
    sum = (n % 2 == 1) ? sum + term : sum - term;
    // Terms past n have valuation >= m*v - floor(log_p m), nondecreasing in m.
    const unsigned long m = n + 1;
    long log_m = 0;
    for (unsigned long q = m; q >= p; q /= p) ++log_m;
    if (static_cast<long>(m) * v - log_m >= target + kGuardDigits) break;
    power *= step;
  }
  return sum.with_absolute_precision(target);
}

PadicNumber exp_p(const PadicNumber& x) {
  const Prime p = x.prime();
  const long need = exp_convergence_valuation(p);
  PadicNumber one = PadicNumber::from_integer(1, p, x.precision());
  if (x.is_exact_zero()) return one;
  if (x.is_zero_to_precision()) {
    if (x.valuation() >= need) return one.with_absolute_precision(x.valuation());
    throw PrecisionError("exp_p: cannot decide convergence");
  }
  const long v = x.valuation();
  if (v < need) {
    throw DomainError("exp_p: |x|_p must be below p^(-1/(p-1)); got valuation " +
                      std::to_string(v));
  }
  const long target = x.is_exact() ? v + x.precision() : x.absolute_precision();
  PadicNumber step = x.is_exact() ? x.approximation() : x;
  PadicNumber term = step;
  PadicNumber sum = one + term;
  const long pm1 = static_cast<long>(p) - 1;
  for (unsigned long n = 2;; ++n) {
    term = term * step / PadicNumber::from_integer(n, p, x.precision());
    sum += term;
    // v_p(m!) <= (m-1)/(p-1), so later terms have valuation >= m*v - (m-1)/(p-1).
    const long m = static_cast<long>(n) + 1;
    if (m * v * pm1 - (m - 1) >= (target + kGuardDigits) * pm1) break;
  }
  return sum.with_absolute_precision(target);
}

}  // namespace padic

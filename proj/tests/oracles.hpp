// Independent reference computations for the test suites: brute force over
// residues and exact rational arithmetic. Nothing here calls into the
// library's arithmetic beyond constructing inputs.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "hcgibbs/padic.hpp"

namespace oracle {

/// The u in [0, m) with den * u = num (mod m), by exhaustive search.
inline mpz_class brute_force_quotient(long num, long den, unsigned long m) {
  for (unsigned long u = 0; u < m; ++u) {
    mpz_class lhs = mpz_class(den) * u - num;
    if (lhs % m == 0) return u;
  }
  throw std::logic_error("no quotient");
}

/// Smallest x in [0, m/2] with x^2 = a (mod m), or -1.
inline long brute_force_sqrt_mod(unsigned long a, unsigned long m) {
  for (unsigned long x = 0; x <= m / 2; ++x) {
    if ((x * x) % m == a % m) return static_cast<long>(x);
  }
  return -1;
}

inline bool is_square_mod(std::uint64_t a, std::uint64_t p) {
  for (std::uint64_t x = 1; x < p; ++x) {
    if ((x * x) % p == a % p) return true;
  }
  return false;
}

/// squares[r] for r in [0, p^e): whether r is a square modulo p^e.
inline std::vector<bool> squares_mod(unsigned long p, long e) {
  unsigned long m = 1;
  for (long i = 0; i < e; ++i) m *= p;
  std::vector<bool> sq(m, false);
  for (unsigned long x = 0; x < m; ++x) {
    sq[static_cast<std::size_t>((static_cast<unsigned __int128>(x) * x) % m)] = true;
  }
  return sq;
}

/// sum_{n=1}^{terms} (-1)^(n+1) y^n / n over Q.
inline mpq_class log_partial_sum(const mpq_class& y, int terms) {
  mpq_class sum = 0, power = y;
  for (int n = 1; n <= terms; ++n) {
    mpq_class term = power / n;
    sum += (n % 2 == 1) ? term : mpq_class(-term);
    power *= y;
  }
  return sum;
}

/// sum_{n=0}^{terms} y^n / n! over Q.
inline mpq_class exp_partial_sum(const mpq_class& y, int terms) {
  mpq_class sum = 1, term = 1;
  for (int n = 1; n <= terms; ++n) {
    term = term * y / n;
    sum += term;
  }
  return sum;
}

/// Random approximation with valuation in [vmin, vmax] and `digits` digits.
inline padic::PadicNumber random_padic(std::mt19937_64& rng, padic::Prime p, int digits,
                                       long vmin, long vmax) {
  std::uniform_int_distribution<unsigned> digit(0, p - 1);
  std::uniform_int_distribution<unsigned> lead(1, p - 1);
  std::uniform_int_distribution<long> val(vmin, vmax);
  std::vector<unsigned> ds(static_cast<std::size_t>(digits));
  ds[0] = lead(rng);
  for (int i = 1; i < digits; ++i) ds[static_cast<std::size_t>(i)] = digit(rng);
  return padic::PadicNumber::from_digits(p, val(rng), ds);
}

/// Exact rational residue: q mod p^k for a p-integral rational q.
inline mpz_class rational_residue(const mpq_class& q, unsigned long p, long k) {
  mpz_class m = padic::prime_power(static_cast<padic::Prime>(p), k);
  mpz_class inv;
  mpz_class den = q.get_den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw std::logic_error("denominator divisible by p");
  }
  mpz_class r = q.get_num() * inv;
  mpz_class out;
  mpz_mod(out.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return out;
}

}  // namespace oracle

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace padic {

using Prime = std::uint32_t;

inline constexpr int kDefaultPrecision = 64;
inline constexpr int kGuardDigits = 8;
inline constexpr long kInfinitePrecision = std::numeric_limits<long>::max();

class PrimeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The operands do not carry enough digits to decide the requested fact.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (zero divisor, series
/// outside its convergence ball, Hensel precondition, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_prime(std::uint64_t n);
Prime checked_prime(std::uint64_t n);

/// p-adic valuation of a nonzero integer.
long valuation_of(const mpz_class& n, Prime p);
mpz_class prime_power(Prime p, long e);

/// |x|_p = p^exponent, or an upper bound on it when the value is only known
/// to be zero modulo p^(-exponent).
struct Norm {
  enum class Kind { Zero, Exact, UpperBound };

  Prime prime = 2;
  Kind kind = Kind::Zero;
  long exponent = 0;

  static Norm zero(Prime p) { return {p, Kind::Zero, 0}; }
  static Norm exact(Prime p, long e) { return {p, Kind::Exact, e}; }
  static Norm upper_bound(Prime p, long e) { return {p, Kind::UpperBound, e}; }

  bool is_zero() const { return kind == Kind::Zero; }
  /// True when |x|_p <= p^e is certain.
  bool at_most(long e) const { return kind == Kind::Zero || exponent <= e; }
  /// The rational p^exponent (0 for Kind::Zero). For an upper bound this is the bound.
  mpq_class value() const;
  std::string str() const;

  friend bool operator==(const Norm&, const Norm&) = default;
};

/// Larger of two norms; an upper bound beats an exact value of the same size.
Norm max_norm(const Norm& a, const Norm& b);

/// Element of Q_p with capped relative precision: u * p^v + O(p^(v+N)),
/// 0 < u < p^N, p does not divide u.
///
/// Values built from rationals additionally keep their exact rational value.
/// Arithmetic between two exact operands stays exact, so exact cancellation
/// produces Kind::ExactZero while cancellation of approximations produces
/// Kind::ZeroToPrecision. An exact operand mixed with an approximation acts
/// as if known to infinite precision.
class PadicNumber {
 public:
  enum class Kind { ExactZero, Nonzero, ZeroToPrecision };

  static PadicNumber exact_zero(Prime p, int precision = kDefaultPrecision);
  /// O(p^absolute_precision).
  static PadicNumber zero_to_precision(Prime p, long absolute_precision,
                                       int precision = kDefaultPrecision);
  static PadicNumber from_integer(const mpz_class& n, Prime p,
                                  int precision = kDefaultPrecision);
  static PadicNumber from_rational(const mpz_class& num, const mpz_class& den,
                                   Prime p, int precision = kDefaultPrecision);
  static PadicNumber from_rational(const mpq_class& q, Prime p,
                                   int precision = kDefaultPrecision);
  /// Approximation u * p^v + O(p^(v+precision)); u is reduced mod p^precision
  /// and must not be divisible by p.
  static PadicNumber from_unit(Prime p, long valuation, const mpz_class& unit,
                               int precision);
  /// Approximation p^v * (d_0 + d_1 p + ...); leading zero digits shift the
  /// valuation. Relative precision is the number of digits after the shift.
  static PadicNumber from_digits(Prime p, long valuation,
                                 std::span<const unsigned> digits);
  /// Approximation of the integer n modulo p^absolute_precision.
  static PadicNumber from_residue(const mpz_class& n, Prime p,
                                  long absolute_precision, int precision_cap);

  Prime prime() const { return p_; }
  Kind kind() const { return kind_; }
  bool is_exact_zero() const { return kind_ == Kind::ExactZero; }
  bool is_zero_to_precision() const { return kind_ == Kind::ZeroToPrecision; }
  bool is_nonzero() const { return kind_ == Kind::Nonzero; }
  /// Exact zero or zero to the available precision.
  bool is_zero() const { return kind_ != Kind::Nonzero; }
  bool is_exact() const { return exact_.has_value(); }
  const std::optional<mpq_class>& exact_value() const { return exact_; }

  /// gamma(x); for a zero-to-precision value this is the known lower bound.
  long valuation() const;
  const mpz_class& unit() const { return unit_; }
  /// Digits carried for nonzero values; the cap used for derived results otherwise.
  int precision() const { return precision_; }
  /// v + N for approximations, kInfinitePrecision for exact values.
  long absolute_precision() const;

  /// Canonical expansion digits x_0..x_{N-1} of the unit part.
  std::vector<unsigned> digits() const;
  Norm norm() const;

  bool is_integral() const;  // |x|_p <= 1
  bool is_unit() const;      // |x|_p == 1
  /// Integral x reduced modulo p^k; throws PrecisionError if fewer than k
  /// digits are known.
  mpz_class residue(long k) const;

  /// Drops the exact shadow, keeping N relative digits.
  PadicNumber approximation() const;
  /// Truncates to at most n relative digits (exact values become approximations).
  PadicNumber with_precision(int n) const;
  /// Truncates to absolute precision a (no-op if already coarser).
  PadicNumber with_absolute_precision(long a) const;

  std::string str() const;

  friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator-(const PadicNumber& x);

  PadicNumber& operator+=(const PadicNumber& y) { return *this = *this + y; }
  PadicNumber& operator-=(const PadicNumber& y) { return *this = *this - y; }
  PadicNumber& operator*=(const PadicNumber& y) { return *this = *this * y; }
  PadicNumber& operator/=(const PadicNumber& y) { return *this = *this / y; }

  /// Structural identity (same kind, digits, precision and exactness).
  friend bool operator==(const PadicNumber& x, const PadicNumber& y);

 private:
  PadicNumber(Prime p, Kind kind, long valuation, mpz_class unit, int precision)
      : p_(p), kind_(kind), valuation_(valuation), unit_(std::move(unit)),
        precision_(precision) {}

  static PadicNumber from_exact(const mpq_class& q, Prime p, int precision);
  /// Unit part modulo p^digits; exact values supply any number of digits.
  mpz_class unit_digits(long digits) const;

  Prime p_;
  Kind kind_;
  long valuation_;  // ZeroToPrecision: absolute precision
  mpz_class unit_;
  int precision_;
  std::optional<mpq_class> exact_;
};

PadicNumber pow(const PadicNumber& x, unsigned n);
/// x and y agree to the available precision.
bool agree(const PadicNumber& x, const PadicNumber& y);

inline PadicNumber add(const PadicNumber& x, const PadicNumber& y) { return x + y; }
inline PadicNumber sub(const PadicNumber& x, const PadicNumber& y) { return x - y; }
inline PadicNumber mul(const PadicNumber& x, const PadicNumber& y) { return x * y; }
inline PadicNumber div(const PadicNumber& x, const PadicNumber& y) { return x / y; }
inline PadicNumber neg(const PadicNumber& x) { return -x; }
inline Norm norm(const PadicNumber& x) { return x.norm(); }

/// Parses "n/d", "n", or a digit list "[x0,x1,...]@v".
PadicNumber parse_padic(const std::string& text, Prime p,
                        int precision = kDefaultPrecision);

// ---------------------------------------------------------------------------
// Sets and balls

/// B(a, r) = {x : |x - a|_p < r} with r = p^(num/den) kept symbolic.
class Ball {
 public:
  Ball(PadicNumber center, long radius_num, long radius_den = 1);
  /// B(a, p^(-1/(p-1))), the convergence ball of exp_p around a.
  static Ball exp_convergence(PadicNumber center);

  const PadicNumber& center() const { return center_; }
  /// Throws PrecisionError when |x - a|_p cannot be compared with r.
  bool contains(const PadicNumber& x) const;

 private:
  PadicNumber center_;
  long radius_num_;
  long radius_den_;
};

/// v >= 1 for odd p, v >= 2 for p = 2: the integer form of |x|_p < p^(-1/(p-1)).
long exp_convergence_valuation(Prime p);

/// E_p = {|x|_p = 1, |x - 1|_p < p^(-1/(p-1))}.
bool in_Ep(const PadicNumber& x);

/// A value certified to lie in E_p.
class EpElement {
 public:
  explicit EpElement(PadicNumber value);
  const PadicNumber& value() const { return value_; }
  operator const PadicNumber&() const { return value_; }

 private:
  PadicNumber value_;
};

/// Euler criterion a^((p-1)/2) == 1 mod p for an odd prime p not dividing a.
bool is_quadratic_residue(const mpz_class& a, Prime p);
/// Square root of a modulo an odd prime (Tonelli-Shanks); a must be a residue.
std::uint64_t sqrt_mod_prime(std::uint64_t a, Prime p);

// ---------------------------------------------------------------------------
// Roots and series

struct RootPair {
  /// For p odd the root whose leading digit is at most (p-1)/2; for p = 2 the
  /// root whose unit part is 1 mod 4.
  PadicNumber first;
  PadicNumber second;  // -first
};

/// Solutions of x^2 = a. std::nullopt when a is not a square in Q_p.
std::optional<RootPair> sqrt(const PadicNumber& a);

/// Newton lifting of a root of F(t) = sum c_i t^i from the seed a0, under
/// |F(a0)|_p < |F'(a0)|_p^2. Returns the root with the digits fixed by the
/// coefficients' precision.
PadicNumber hensel_lift(std::span<const PadicNumber> coeffs, const PadicNumber& a0);

PadicNumber log_p(const PadicNumber& x);
PadicNumber exp_p(const PadicNumber& x);

}  // namespace padic

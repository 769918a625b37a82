#include "hcgibbs/padic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace padic {

namespace {

mpz_class mod_positive(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class invert_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw DomainError("element is not invertible modulo p^N");
  }
  return r;
}

/// Strips p from n in place and returns the number of factors removed.
long strip_prime(mpz_class& n, Prime p) {
  if (n == 0) return 0;
  mpz_class pp(p);
  return static_cast<long>(
      mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

void require_same_prime(const PadicNumber& x, const PadicNumber& y) {
  if (x.prime() != y.prime()) {
    throw PrimeMismatch("operands use different primes (" +
                        std::to_string(x.prime()) + " vs " +
                        std::to_string(y.prime()) + ")");
  }
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Prime checked_prime(std::uint64_t n) {
  if (n > std::numeric_limits<Prime>::max() || !is_prime(n)) {
    throw std::invalid_argument(std::to_string(n) + " is not a supported prime");
  }
  return static_cast<Prime>(n);
}

long valuation_of(const mpz_class& n, Prime p) {
  if (n == 0) throw DomainError("valuation of zero");
  mpz_class m = n;
  return strip_prime(m, p);
}

mpz_class prime_power(Prime p, long e) {
  if (e < 0) throw std::invalid_argument("negative exponent in prime_power");
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e));
  return r;
}

// --------------------------------------------------------------------------
// Norm

mpq_class Norm::value() const {
  if (kind == Kind::Zero) return 0;
  mpq_class q(prime_power(prime, std::labs(exponent)));
  if (exponent < 0) q = 1 / q;
  return q;
}

std::string Norm::str() const {
  if (kind == Kind::Zero) return "0";
  std::string base = exponent == 0 ? std::string("1")
                                    : std::to_string(prime) + "^" + std::to_string(exponent);
  return kind == Kind::UpperBound ? "<=" + base : base;
}

Norm max_norm(const Norm& a, const Norm& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.exponent != b.exponent) return a.exponent > b.exponent ? a : b;
  return a.kind == Norm::Kind::UpperBound ? a : b;
}

// --------------------------------------------------------------------------
// Construction

PadicNumber PadicNumber::exact_zero(Prime p, int precision) {
  PadicNumber z(p, Kind::ExactZero, 0, 0, precision);
  z.exact_ = mpq_class(0);
  return z;
}

PadicNumber PadicNumber::zero_to_precision(Prime p, long absolute_precision,
                                           int precision) {
  return PadicNumber(p, Kind::ZeroToPrecision, absolute_precision, 0, precision);
}

PadicNumber PadicNumber::from_exact(const mpq_class& q, Prime p, int precision) {
  if (precision < 1) throw std::invalid_argument("precision must be positive");
  if (q == 0) return exact_zero(p, precision);
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  long v = strip_prime(num, p) - strip_prime(den, p);
  mpz_class modulus = prime_power(p, precision);
  mpz_class unit = mod_positive(num * invert_mod(den, modulus), modulus);
  PadicNumber x(p, Kind::Nonzero, v, std::move(unit), precision);
  x.exact_ = q;
  return x;
}

PadicNumber PadicNumber::from_integer(const mpz_class& n, Prime p, int precision) {
  return from_exact(mpq_class(n), checked_prime(p), precision);
}

PadicNumber PadicNumber::from_rational(const mpz_class& num, const mpz_class& den,
                                       Prime p, int precision) {
  if (den == 0) throw DomainError("zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return from_exact(q, checked_prime(p), precision);
}

PadicNumber PadicNumber::from_rational(const mpq_class& q, Prime p, int precision) {
  mpq_class c = q;
  c.canonicalize();
  return from_exact(c, checked_prime(p), precision);
}

PadicNumber PadicNumber::from_unit(Prime p, long valuation, const mpz_class& unit,
                                   int precision) {
  if (precision < 1) throw std::invalid_argument("precision must be positive");
  mpz_class u = mod_positive(unit, prime_power(p, precision));
  if (mpz_divisible_ui_p(u.get_mpz_t(), p)) {
    throw std::invalid_argument("unit part is divisible by p");
  }
  return PadicNumber(p, Kind::Nonzero, valuation, std::move(u), precision);
}

PadicNumber PadicNumber::from_digits(Prime p, long valuation,
                                     std::span<const unsigned> digits) {
  checked_prime(p);
  if (digits.empty()) throw std::invalid_argument("empty digit list");
  std::size_t lead = 0;
  while (lead < digits.size() && digits[lead] == 0) ++lead;
  for (unsigned d : digits) {
    if (d >= p) throw std::invalid_argument("digit out of range for prime");
  }
  long precision_cap = static_cast<long>(digits.size());
  if (lead == digits.size()) {
    return zero_to_precision(p, valuation + precision_cap,
                             static_cast<int>(precision_cap));
  }
  mpz_class unit = 0;
  for (std::size_t i = digits.size(); i-- > lead;) unit = unit * p + digits[i];
  return PadicNumber(p, Kind::Nonzero, valuation + static_cast<long>(lead),
                     std::move(unit), static_cast<int>(digits.size() - lead));
}

PadicNumber PadicNumber::from_residue(const mpz_class& n, Prime p,
                                      long absolute_precision, int precision_cap) {
  if (absolute_precision <= 0) {
    return zero_to_precision(p, absolute_precision, precision_cap);
  }
  mpz_class r = mod_positive(n, prime_power(p, absolute_precision));
  if (r == 0) return zero_to_precision(p, absolute_precision, precision_cap);
  long w = strip_prime(r, p);
  long rel = std::min<long>(absolute_precision - w, precision_cap);
  r = mod_positive(r, prime_power(p, rel));
  return PadicNumber(p, Kind::Nonzero, w, std::move(r), static_cast<int>(rel));
}

// --------------------------------------------------------------------------
// Accessors

long PadicNumber::valuation() const {
  if (kind_ == Kind::ExactZero) return kInfinitePrecision;
  return valuation_;
}

long PadicNumber::absolute_precision() const {
  if (exact_) return kInfinitePrecision;
  if (kind_ == Kind::ZeroToPrecision) return valuation_;
  return valuation_ + precision_;
}

mpz_class PadicNumber::unit_digits(long digits) const {
  if (digits <= 0 || kind_ != Kind::Nonzero) return 0;
  mpz_class modulus = prime_power(p_, digits);
  if (exact_) {
    mpz_class num = exact_->get_num();
    mpz_class den = exact_->get_den();
    strip_prime(num, p_);
    strip_prime(den, p_);
    return mod_positive(num * invert_mod(den, modulus), modulus);
  }
  if (digits > precision_) {
    throw PrecisionError("requested " + std::to_string(digits) +
                         " digits of a value known to " +
                         std::to_string(precision_));
  }
  return mod_positive(unit_, modulus);
}

std::vector<unsigned> PadicNumber::digits() const {
  std::vector<unsigned> out;
  if (kind_ != Kind::Nonzero) return out;
  mpz_class u = unit_;
  out.reserve(static_cast<std::size_t>(precision_));
  for (int i = 0; i < precision_; ++i) {
    out.push_back(static_cast<unsigned>(mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), p_)));
  }
  return out;
}

Norm PadicNumber::norm() const {
  switch (kind_) {
    case Kind::ExactZero:
      return Norm::zero(p_);
    case Kind::ZeroToPrecision:
      return Norm::upper_bound(p_, -valuation_);
    case Kind::Nonzero:
      break;
  }
  return Norm::exact(p_, -valuation_);
}

bool PadicNumber::is_integral() const {
  switch (kind_) {
    case Kind::ExactZero:
      return true;
    case Kind::ZeroToPrecision:
      if (valuation_ >= 0) return true;
      throw PrecisionError("cannot decide integrality of O(p^" +
                           std::to_string(valuation_) + ")");
    case Kind::Nonzero:
      break;
  }
  return valuation_ >= 0;
}

bool PadicNumber::is_unit() const {
  if (kind_ == Kind::ZeroToPrecision && valuation_ <= 0) {
    throw PrecisionError("cannot decide whether O(p^" + std::to_string(valuation_) +
                         ") is a unit");
  }
  return kind_ == Kind::Nonzero && valuation_ == 0;
}

mpz_class PadicNumber::residue(long k) const {
  if (!is_integral()) throw DomainError("residue of a non-integral value");
  if (k <= 0) return 0;
  switch (kind_) {
    case Kind::ExactZero:
      return 0;
    case Kind::ZeroToPrecision:
      if (valuation_ >= k) return 0;
      throw PrecisionError("value known only modulo p^" + std::to_string(valuation_));
    case Kind::Nonzero:
      break;
  }
  if (valuation_ >= k) return 0;
  return unit_digits(k - valuation_) * prime_power(p_, valuation_);
}

PadicNumber PadicNumber::approximation() const {
  if (kind_ == Kind::ExactZero) return zero_to_precision(p_, precision_, precision_);
  PadicNumber x = *this;
  x.exact_.reset();
  return x;
}

PadicNumber PadicNumber::with_precision(int n) const {
  if (n < 1) throw std::invalid_argument("precision must be positive");
  if (kind_ != Kind::Nonzero) return *this;
  int rel = exact_ ? n : std::min(n, precision_);
  mpz_class u = unit_digits(rel);
  return PadicNumber(p_, Kind::Nonzero, valuation_, std::move(u), rel);
}

PadicNumber PadicNumber::with_absolute_precision(long a) const {
  switch (kind_) {
    case Kind::ExactZero:
      return *this;
    case Kind::ZeroToPrecision:
      return zero_to_precision(p_, std::min(valuation_, a), precision_);
    case Kind::Nonzero:
      break;
  }
  if (a >= absolute_precision()) return *this;
  long rel = a - valuation_;
  if (rel <= 0) return zero_to_precision(p_, a, precision_);
  return PadicNumber(p_, Kind::Nonzero, valuation_, unit_digits(rel),
                     static_cast<int>(rel));
}

std::string PadicNumber::str() const {
  switch (kind_) {
    case Kind::ExactZero:
      return "0";
    case Kind::ZeroToPrecision:
      return "O(" + std::to_string(p_) + "^" + std::to_string(valuation_) + ")";
    case Kind::Nonzero:
      break;
  }
  if (exact_) return exact_->get_str();
  std::ostringstream os;
  os << '[';
  auto ds = digits();
  for (std::size_t i = 0; i < ds.size(); ++i) os << (i ? "," : "") << ds[i];
  os << "]@" << valuation_;
  return os.str();
}

bool operator==(const PadicNumber& x, const PadicNumber& y) {
  return x.p_ == y.p_ && x.kind_ == y.kind_ && x.valuation_ == y.valuation_ &&
         x.unit_ == y.unit_ && x.precision_ == y.precision_ && x.exact_ == y.exact_;
}

// --------------------------------------------------------------------------
// Arithmetic

PadicNumber operator-(const PadicNumber& x) {
  if (x.exact_) return PadicNumber::from_exact(-*x.exact_, x.p_, x.precision_);
  if (x.kind_ != PadicNumber::Kind::Nonzero) return x;
  mpz_class modulus = prime_power(x.p_, x.precision_);
  return PadicNumber(x.p_, x.kind_, x.valuation_, mod_positive(-x.unit_, modulus),
                     x.precision_);
}

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  if (x.is_exact_zero()) return y;
  if (y.is_exact_zero()) return x;
  const int cap = std::max(x.precision_, y.precision_);
  if (x.exact_ && y.exact_) {
    return PadicNumber::from_exact(*x.exact_ + *y.exact_, x.p_, cap);
  }
  const long absolute = std::min(x.absolute_precision(), y.absolute_precision());
  long low = kInfinitePrecision;
  if (x.is_nonzero()) low = std::min(low, x.valuation_);
  if (y.is_nonzero()) low = std::min(low, y.valuation_);
  if (low >= absolute) return PadicNumber::zero_to_precision(x.p_, absolute, cap);

  auto scaled = [&](const PadicNumber& z) -> mpz_class {
    if (!z.is_nonzero()) return 0;
    return z.unit_digits(absolute - z.valuation_) *
           prime_power(z.p_, z.valuation_ - low);
  };
  mpz_class sum = scaled(x) + scaled(y);
  PadicNumber r = PadicNumber::from_residue(sum, x.p_, absolute - low, cap);
  if (r.kind_ == PadicNumber::Kind::Nonzero) {
    r.valuation_ += low;
  } else {
    r.valuation_ = absolute;
  }
  return r;
}

PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  if (x.exact_ && y.exact_) {
    return PadicNumber::from_exact(*x.exact_ - *y.exact_, x.p_,
                                   std::max(x.precision_, y.precision_));
  }
  return x + (-y);
}

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  const int cap = std::max(x.precision_, y.precision_);
  if (x.is_exact_zero() || y.is_exact_zero()) return PadicNumber::exact_zero(x.p_, cap);
  if (x.exact_ && y.exact_) {
    return PadicNumber::from_exact(*x.exact_ * *y.exact_, x.p_, cap);
  }
  if (x.is_zero_to_precision() || y.is_zero_to_precision()) {
    // O(p^a) * z = O(p^(a + v(z))).
    const PadicNumber& zero = x.is_zero_to_precision() ? x : y;
    const PadicNumber& other = x.is_zero_to_precision() ? y : x;
    long a = zero.valuation_ + other.valuation_;
    return PadicNumber::zero_to_precision(x.p_, a, cap);
  }
  int rel;
  if (x.exact_) {
    rel = y.precision_;
  } else if (y.exact_) {
    rel = x.precision_;
  } else {
    rel = std::min(x.precision_, y.precision_);
  }
  mpz_class modulus = prime_power(x.p_, rel);
  mpz_class u = mod_positive(x.unit_digits(rel) * y.unit_digits(rel), modulus);
  return PadicNumber(x.p_, PadicNumber::Kind::Nonzero, x.valuation_ + y.valuation_,
                     std::move(u), rel);
}

PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  if (!y.is_nonzero()) throw DomainError("division by a zero-like value");
  const int cap = std::max(x.precision_, y.precision_);
  if (x.is_exact_zero()) return PadicNumber::exact_zero(x.p_, cap);
  if (x.exact_ && y.exact_) {
    return PadicNumber::from_exact(*x.exact_ / *y.exact_, x.p_, cap);
  }
  if (x.is_zero_to_precision()) {
    return PadicNumber::zero_to_precision(x.p_, x.valuation_ - y.valuation_, cap);
  }
  int rel;
  if (x.exact_) {
    rel = y.precision_;
  } else if (y.exact_) {
    rel = x.precision_;
  } else {
    rel = std::min(x.precision_, y.precision_);
  }
  mpz_class modulus = prime_power(x.p_, rel);
  mpz_class u = mod_positive(x.unit_digits(rel) * invert_mod(y.unit_digits(rel), modulus),
                             modulus);
  return PadicNumber(x.p_, PadicNumber::Kind::Nonzero, x.valuation_ - y.valuation_,
                     std::move(u), rel);
}

PadicNumber pow(const PadicNumber& x, unsigned n) {
  PadicNumber result = PadicNumber::from_integer(1, x.prime(), x.precision());
  PadicNumber base = x;
  while (n > 0) {
    if (n & 1u) result *= base;
    n >>= 1u;
    if (n > 0) base *= base;
  }
  return result;
}

bool agree(const PadicNumber& x, const PadicNumber& y) { return (x - y).is_zero(); }

// --------------------------------------------------------------------------
// Parsing

namespace {

std::string trim(const std::string& s) {
  auto b = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  auto e = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return b < e ? std::string(b, e) : std::string();
}

mpz_class parse_integer(const std::string& s) {
  std::string t = trim(s);
  std::size_t start = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
  if (start == t.size() ||
      !std::all_of(t.begin() + static_cast<long>(start), t.end(),
                   [](unsigned char c) { return std::isdigit(c); })) {
    throw std::invalid_argument("malformed integer '" + s + "'");
  }
  if (t[0] == '+') t.erase(0, 1);
  return mpz_class(t, 10);
}

}  // namespace

PadicNumber parse_padic(const std::string& text, Prime p, int precision) {
  std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty number");
  if (t.front() == '[') {
    auto close = t.find(']');
    if (close == std::string::npos) throw std::invalid_argument("missing ']' in digit list");
    std::vector<unsigned> digits;
    std::stringstream body(t.substr(1, close - 1));
    std::string item;
    while (std::getline(body, item, ',')) {
      mpz_class d = parse_integer(item);
      if (d < 0 || d >= p) throw std::invalid_argument("digit out of range: " + item);
      digits.push_back(static_cast<unsigned>(d.get_ui()));
    }
    long v = 0;
    std::string rest = trim(t.substr(close + 1));
    if (!rest.empty()) {
      if (rest.front() != '@') throw std::invalid_argument("expected '@v' after digit list");
      v = parse_integer(rest.substr(1)).get_si();
    }
    return PadicNumber::from_digits(p, v, digits);
  }
  auto slash = t.find('/');
  mpz_class num = parse_integer(t.substr(0, slash));
  mpz_class den = slash == std::string::npos ? mpz_class(1) : parse_integer(t.substr(slash + 1));
  return PadicNumber::from_rational(num, den, p, precision);
}

// --------------------------------------------------------------------------
// Sets and balls

Ball::Ball(PadicNumber center, long radius_num, long radius_den)
    : center_(std::move(center)), radius_num_(radius_num), radius_den_(radius_den) {
  if (radius_den_ <= 0) throw std::invalid_argument("radius exponent denominator must be positive");
}

Ball Ball::exp_convergence(PadicNumber center) {
  const long den = static_cast<long>(center.prime()) - 1;
  return Ball(std::move(center), -1, den);
}

bool Ball::contains(const PadicNumber& x) const {
  PadicNumber d = x - center_;
  if (d.is_exact_zero()) return true;
  // |d| = p^(-v) < p^(num/den)  <=>  v * den > -num
  if (d.is_nonzero()) return d.valuation() * radius_den_ > -radius_num_;
  if (d.valuation() * radius_den_ > -radius_num_) return true;
  throw PrecisionError("ball membership undecidable at O(p^" +
                       std::to_string(d.valuation()) + ")");
}

long exp_convergence_valuation(Prime p) { return p == 2 ? 2 : 1; }

bool in_Ep(const PadicNumber& x) {
  if (!x.is_unit()) return false;
  const long k = exp_convergence_valuation(x.prime());
  return x.residue(k) == 1;
}

EpElement::EpElement(PadicNumber value) : value_(std::move(value)) {
  if (!in_Ep(value_)) {
    throw DomainError(value_.str() + " is not in E_" + std::to_string(value_.prime()) +
                      (value_.prime() == 2 ? " (need unit with x = 1 mod 4)"
                                           : " (need unit with x = 1 mod p)"));
  }
}

bool is_quadratic_residue(const mpz_class& a, Prime p) {
  if (p == 2) throw std::invalid_argument("quadratic residues are defined here for odd p");
  mpz_class r = mod_positive(a, p);
  if (r == 0) throw DomainError("p divides a");
  mpz_class e = (p - 1) / 2;
  mpz_class out;
  mpz_class pp(p);
  mpz_powm(out.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), pp.get_mpz_t());
  return out == 1;
}

}  // namespace padic

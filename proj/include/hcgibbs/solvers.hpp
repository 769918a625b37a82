#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcgibbs/gibbs.hpp"

namespace hcgibbs {

/// A solver's preconditions do not hold. Says nothing about existence.
class MethodNotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Precheck { Unique, Undetermined };

/// Sufficient uniqueness condition for TI laws on the tree of order k.
Precheck uniqueness_precheck(Prime p, int k);

/// z_i - lambda ((1 + z_i) / (z_1 + z_2))^k for i = 1, 2.
std::pair<PadicNumber, PadicNumber> wand_residual(const ModelParams& m, const PadicNumber& z1,
                                                  const PadicNumber& z2);
Norm wand_residual_norm(const ModelParams& m, const PadicNumber& z1, const PadicNumber& z2);

struct TISolution {
  PadicNumber z1;
  PadicNumber z2;
  Norm residual;
  bool solves = false;  // both residuals vanish to precision

  BoundaryLaw law() const { return BoundaryLaw::translation_invariant(z1, z2); }
};

/// Root t* = 1 mod p of 2^k t^(k+1) - lambda (1 + t)^k by Hensel lifting from
/// `seed` (default 1). Throws MethodNotApplicable when the lifting condition
/// fails at the seed.
TISolution solve_ti_diagonal(const ModelParams& m,
                             const std::optional<PadicNumber>& seed = std::nullopt);

struct OffDiagonalPair {
  TISolution plus_minus;  // (z+, z-)
  TISolution minus_plus;  // (z-, z+)
};

/// The two off-diagonal TI laws for k = 2, p > 3; std::nullopt when they do
/// not exist. Throws MethodNotApplicable outside k = 2, p > 3.
std::optional<OffDiagonalPair> solve_ti_offdiagonal(const ModelParams& m);

/// 16 lambda - 16 has even positive valuation 2n and its leading digit over 3
/// is a quadratic residue mod p. Requires p > 3.
bool lambda_region_ti(const EpElement& lambda);

enum class TIVerdict { Unique, ThreeTI, Unknown };

struct TIClassification {
  TIVerdict verdict = TIVerdict::Unknown;
  Precheck precheck = Precheck::Undetermined;
  std::optional<bool> region;  // set when p > 3 and k = 2
  std::vector<TISolution> witnesses;
  std::string note;
};

/// For k = 2 and p > 3: Unique (diagonal witness) or ThreeTI (diagonal plus
/// both off-diagonal witnesses). Elsewhere the precheck decides Unique, and
/// the diagonal witness is attached when Hensel lifting applies.
TIClassification classify_ti(const ModelParams& m);

/// 1 - lambda is a nonzero square, read off the digit pattern of lambda - 1.
bool sqrt_one_minus_lambda_region(const EpElement& lambda);
/// Same question answered by computing the square root.
bool sqrt_one_minus_lambda_exists(const EpElement& lambda);

/// f(z) = lambda ((1 + z) / (2z))^2.
PadicNumber period_map(const ModelParams& m, const PadicNumber& z);

struct PeriodicSolution {
  PadicNumber plus;   // even levels, used as (z+, z+)
  PadicNumber minus;  // odd levels, used as (z-, z-)

  BoundaryLaw law() const;
  BoundaryLaw swapped_law() const;
};

/// Period-two law for k = 2; std::nullopt when sqrt(1 - lambda) does not exist
/// (including lambda = 1).
std::optional<PeriodicSolution> solve_periodic(const ModelParams& m);

struct PerSystemReport {
  std::array<Norm, 4> residuals;
  Norm max_residual;
  Norm slack;  // min_i |z_i - t_i|_p
  bool equations_hold = false;
  bool distinct = false;
  bool passed = false;
};

/// Substitutes z on even and t on odd levels into the four-equation period-two
/// system and checks z_i != t_i.
PerSystemReport verify_per_system(const ModelParams& m,
                                  const std::pair<PadicNumber, PadicNumber>& z,
                                  const std::pair<PadicNumber, PadicNumber>& t);
PerSystemReport verify_per_system(const PeriodicSolution& sol, const ModelParams& m);

/// F_i(z) = (1 + z_i) / (z_1 + z_2).
std::pair<PadicNumber, PadicNumber> F_map(const PadicNumber& z1, const PadicNumber& z2);
/// Inverse of F_map: S = 2 / (a_1 + a_2 - 1), z_i = a_i S - 1.
std::pair<PadicNumber, PadicNumber> F_inverse(const PadicNumber& a1, const PadicNumber& a2);

struct InjectivityReport {
  Prime prime = 2;
  std::size_t samples = 0;
  std::size_t counterexamples = 0;   // z != t with F(z) = F(t)
  std::size_t inverse_failures = 0;  // F_inverse(F(z)) != z
  bool passed = false;
};

InjectivityReport F_injectivity_check(std::size_t samples, Prime p, std::uint64_t seed,
                                      int precision = padic::kDefaultPrecision);

const char* to_string(Precheck v);
const char* to_string(TIVerdict v);

}  // namespace hcgibbs

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hcgibbs/padic.hpp"
#include "hcgibbs/tree.hpp"

namespace hcgibbs {

using padic::EpElement;
using padic::Norm;
using padic::PadicNumber;
using padic::Prime;

/// Activity lambda in E_p (lambda_0 = 1, lambda_1 = lambda_2 = lambda) on the
/// Cayley tree of order k.
class ModelParams {
 public:
  ModelParams(EpElement lambda, int k);

  const PadicNumber& lambda() const { return lambda_.value(); }
  int order() const { return k_; }
  Prime prime() const { return lambda_.value().prime(); }
  int precision() const { return lambda_.value().precision(); }

 private:
  EpElement lambda_;
  int k_;
};

/// (z_0, z'_1, z'_2) at one vertex; z_{i,x} = z_0 * z'_i / lambda.
struct BoundaryValue {
  PadicNumber gauge;
  PadicNumber z1;
  PadicNumber z2;
};

/// Boundary law x -> (z'_{1,x}, z'_{2,x}). For the translation-invariant and
/// period-two forms the root value is not free: it is fixed by the
/// compatibility equation over the root's k+1 children. Tables carry every
/// vertex explicitly, root included.
class BoundaryLaw {
 public:
  enum class Form { TranslationInvariant, PeriodTwo, Table };

  static BoundaryLaw translation_invariant(PadicNumber z1, PadicNumber z2);
  /// Even levels use `even`, odd levels `odd`.
  static BoundaryLaw period_two(std::pair<PadicNumber, PadicNumber> even,
                                std::pair<PadicNumber, PadicNumber> odd);
  static BoundaryLaw table(std::vector<BoundaryValue> values);

  /// Per-vertex gauge z_{0,x} (breadth-first index); missing entries are 1.
  BoundaryLaw with_gauge(std::vector<PadicNumber> gauge) const;
  /// Exchanges z'_1 and z'_2 everywhere.
  BoundaryLaw swapped() const;

  Form form() const { return form_; }

  /// Values on every vertex of `layout`. Throws std::invalid_argument when a
  /// non-root value is outside E_p or a table is too short.
  std::vector<BoundaryValue> tabulate(const TreeLayout& layout, const ModelParams& m) const;

 private:
  BoundaryLaw() = default;
  std::pair<PadicNumber, PadicNumber> value_at_level(int level) const;

  Form form_ = Form::TranslationInvariant;
  std::vector<std::pair<PadicNumber, PadicNumber>> levels_;  // TI: 1 entry, period two: 2
  std::vector<BoundaryValue> table_;
  std::vector<PadicNumber> gauge_;
};

/// z'_{i,x} scaled by (1 + p) (1 + 4 for p = 2) for i = 1 at every vertex of
/// the layout, root included.
BoundaryLaw perturbed(const BoundaryLaw& law, const TreeLayout& layout, const ModelParams& m);

/// Right-hand side lambda * prod_{y in S(x)} (1 + z'_{i,y}) / (z'_{1,y} + z'_{2,y}).
std::pair<PadicNumber, PadicNumber> compatibility_image(
    std::span<const BoundaryValue> values, const TreeLayout& layout, Vertex x,
    const ModelParams& m);

PadicNumber hamiltonian(const Configuration& c, const ModelParams& m);

PadicNumber unnormalized_weight(const Configuration& c, const ModelParams& m,
                                const BoundaryLaw& b);

PadicNumber partition_function(const ModelParams& m, const BoundaryLaw& b, int n,
                               std::size_t cap = kDefaultEnumerationCap);

struct MeasureValue {
  PadicNumber value;
  int volume;
};

MeasureValue measure(const Configuration& c, const ModelParams& m, const BoundaryLaw& b,
                     std::size_t cap = kDefaultEnumerationCap);

struct ConsistencyReport {
  int volume = 0;
  std::size_t checked = 0;  // |Omega_{V_{n-1}}|
  Norm max_defect_norm;
  bool passed = false;  // every defect is zero to precision
};

ConsistencyReport check_consistency(const ModelParams& m, const BoundaryLaw& b, int n,
                                    std::size_t cap = kDefaultEnumerationCap);

struct CompatibilityReport {
  int depth = 0;
  Norm max_residual_norm;
  std::vector<std::pair<Vertex, Norm>> residuals;  // per non-leaf vertex
  bool passed = false;
};

CompatibilityReport verify_compatibility(const BoundaryLaw& b, const ModelParams& m,
                                         int depth);

/// a_z(x) = prod_{y in S(x)} z_{0,y} (z'_{1,y} + z'_{2,y}) / z_{0,x}.
PadicNumber local_factor(const BoundaryLaw& b, const ModelParams& m,
                         const TreeLayout& layout, Vertex x);

struct RecursionReport {
  int volume = 0;
  PadicNumber next_partition;   // Z_{n+1} by enumeration
  PadicNumber product;          // A_n * Z_n
  Norm difference_norm;
  bool passed = false;
};

RecursionReport verify_partition_recursion(const ModelParams& m, const BoundaryLaw& b, int n,
                                           std::size_t cap = kDefaultEnumerationCap);

struct BoundednessReport {
  int volume = 0;
  Norm znorm;
  Norm munorm;
  bool common_munorm = true;  // every configuration has the same |mu|_p
  bool bounded = false;
  /// Closed forms 1 (p != 2) and 2^(-k|V_{n-1}|) for the partition function.
  Norm predicted_znorm;
  Norm predicted_munorm;
  bool matches_prediction = false;
};

BoundednessReport boundedness_norms(const ModelParams& m, const BoundaryLaw& b, int n,
                                    std::size_t cap = kDefaultEnumerationCap);

enum class Transition { None, Quasi };

/// Quasi when at least two (bounded) Gibbs measures are available, which
/// requires p != 2. A strong transition never occurs: every measure has the
/// same norm profile.
Transition detect_transition(const ModelParams& m, std::span<const BoundaryLaw> ti_laws,
                             std::span<const BoundaryLaw> periodic_laws);

const char* to_string(Transition t);

}  // namespace hcgibbs

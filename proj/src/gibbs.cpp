#include "hcgibbs/gibbs.hpp"

#include <map>
#include <string>

namespace hcgibbs {

namespace {

PadicNumber one_like(const PadicNumber& x) {
  return PadicNumber::from_integer(1, x.prime(), x.precision());
}

PadicNumber integer_like(long n, const PadicNumber& x) {
  return PadicNumber::from_integer(n, x.prime(), x.precision());
}

/// z_{s,x} for s = 0, 1, 2.
std::array<PadicNumber, 3> weights_at(const BoundaryValue& v, const ModelParams& m) {
  return {v.gauge, v.gauge * v.z1 / m.lambda(), v.gauge * v.z2 / m.lambda()};
}

std::pair<PadicNumber, PadicNumber> ratio_power(const PadicNumber& a1, const PadicNumber& a2,
                                                const ModelParams& m, unsigned times) {
  const PadicNumber one = one_like(m.lambda());
  const PadicNumber sum = a1 + a2;
  if (sum.is_zero()) throw padic::DomainError("z'_1 + z'_2 vanishes");
  return {m.lambda() * padic::pow((one + a1) / sum, times),
          m.lambda() * padic::pow((one + a2) / sum, times)};
}

/// Evaluates the finite-volume weights of every admissible configuration on
/// V_n in enumeration order.
class VolumeWeights {
 public:
  VolumeWeights(const ModelParams& m, const BoundaryLaw& b, int n, std::size_t cap)
      : layout_(TreeLayout::build(m.order(), n)), values_(b.tabulate(layout_, m)) {
    const auto boundary = layout_.sphere(n);
    z_.reserve(boundary.size());
    for (Vertex x : boundary) z_.push_back(weights_at(values_[x], m));
    lambda_powers_.push_back(one_like(m.lambda()));
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      lambda_powers_.push_back(lambda_powers_.back() * m.lambda());
    }
    first_boundary_ = boundary.empty() ? 0 : boundary.front();
    for_each_admissible(
        layout_, {},
        [&](const Configuration& c) {
          keys_.push_back(c.str());
          weights_.push_back(weight(c));
          return true;
        },
        cap);
  }

  PadicNumber weight(const Configuration& c) const {
    PadicNumber w = lambda_powers_[occupied_count(c)];
    for (std::size_t i = 0; i < z_.size(); ++i) w *= z_[i][c[first_boundary_ + static_cast<Vertex>(i)]];
    return w;
  }

  PadicNumber total() const {
    PadicNumber z = PadicNumber::exact_zero(lambda_powers_.front().prime(),
                                            lambda_powers_.front().precision());
    for (const auto& w : weights_) z += w;
    return z;
  }

  const TreeLayout& layout() const { return layout_; }
  const std::vector<BoundaryValue>& values() const { return values_; }
  const std::vector<std::string>& keys() const { return keys_; }
  const std::vector<PadicNumber>& weights() const { return weights_; }

 private:
  TreeLayout layout_;
  std::vector<BoundaryValue> values_;
  std::vector<std::array<PadicNumber, 3>> z_;
  std::vector<PadicNumber> lambda_powers_;
  Vertex first_boundary_ = 0;
  std::vector<std::string> keys_;
  std::vector<PadicNumber> weights_;
};

PadicNumber raw_local_factor(std::span<const BoundaryValue> values, const TreeLayout& layout,
                             Vertex x) {
  const auto children = layout.children(x);
  if (children.empty()) throw std::invalid_argument("local factor needs the children of x");
  PadicNumber a = one_like(values[x].gauge);
  for (Vertex y : children) a *= values[y].gauge * (values[y].z1 + values[y].z2);
  return a / values[x].gauge;
}

PadicNumber checked_partition(const PadicNumber& z) {
  if (z.is_zero()) {
    throw padic::PrecisionError("partition function vanishes to working precision");
  }
  return z;
}

}  // namespace

// --------------------------------------------------------------------------

ModelParams::ModelParams(EpElement lambda, int k) : lambda_(std::move(lambda)), k_(k) {
  if (k < 1) throw std::invalid_argument("tree order k must be >= 1");
}

BoundaryLaw BoundaryLaw::translation_invariant(PadicNumber z1, PadicNumber z2) {
  BoundaryLaw b;
  b.form_ = Form::TranslationInvariant;
  b.levels_.emplace_back(std::move(z1), std::move(z2));
  return b;
}

BoundaryLaw BoundaryLaw::period_two(std::pair<PadicNumber, PadicNumber> even,
                                    std::pair<PadicNumber, PadicNumber> odd) {
  BoundaryLaw b;
  b.form_ = Form::PeriodTwo;
  b.levels_.push_back(std::move(even));
  b.levels_.push_back(std::move(odd));
  return b;
}

BoundaryLaw BoundaryLaw::table(std::vector<BoundaryValue> values) {
  if (values.empty()) throw std::invalid_argument("empty boundary-law table");
  BoundaryLaw b;
  b.form_ = Form::Table;
  b.table_ = std::move(values);
  return b;
}

BoundaryLaw BoundaryLaw::with_gauge(std::vector<PadicNumber> gauge) const {
  BoundaryLaw b = *this;
  b.gauge_ = std::move(gauge);
  return b;
}

BoundaryLaw BoundaryLaw::swapped() const {
  BoundaryLaw b = *this;
  for (auto& [z1, z2] : b.levels_) std::swap(z1, z2);
  for (auto& v : b.table_) std::swap(v.z1, v.z2);
  return b;
}

std::pair<PadicNumber, PadicNumber> BoundaryLaw::value_at_level(int level) const {
  return form_ == Form::PeriodTwo ? levels_[static_cast<std::size_t>(level % 2)] : levels_[0];
}

std::vector<BoundaryValue> BoundaryLaw::tabulate(const TreeLayout& layout,
                                                 const ModelParams& m) const {
  if (form_ == Form::Table && table_.size() < layout.size()) {
    throw std::invalid_argument("boundary-law table covers " + std::to_string(table_.size()) +
                                " vertices, layout needs " + std::to_string(layout.size()));
  }
  std::vector<BoundaryValue> out;
  out.reserve(layout.size());
  for (Vertex x = 0; x < layout.size(); ++x) {
    PadicNumber gauge = x < gauge_.size() ? gauge_[x] : one_like(m.lambda());
    if (form_ == Form::Table) {
      BoundaryValue v = table_[x];
      if (x < gauge_.size()) v.gauge = gauge;
      out.push_back(std::move(v));
    } else if (x == TreeLayout::root()) {
      auto [a1, a2] = value_at_level(1);
      auto [r1, r2] = ratio_power(a1, a2, m, static_cast<unsigned>(m.order() + 1));
      out.push_back({std::move(gauge), std::move(r1), std::move(r2)});
    } else {
      auto [z1, z2] = value_at_level(layout.level(x));
      out.push_back({std::move(gauge), std::move(z1), std::move(z2)});
    }
    const BoundaryValue& v = out.back();
    if (v.gauge.prime() != m.prime() || v.z1.prime() != m.prime() || v.z2.prime() != m.prime()) {
      throw padic::PrimeMismatch("boundary law and model use different primes");
    }
    if (!padic::in_Ep(v.gauge)) throw std::invalid_argument("gauge outside E_p");
    if (x != TreeLayout::root() && !(padic::in_Ep(v.z1) && padic::in_Ep(v.z2))) {
      throw std::invalid_argument("boundary law value outside E_p at vertex " +
                                  std::to_string(x));
    }
  }
  return out;
}

BoundaryLaw perturbed(const BoundaryLaw& law, const TreeLayout& layout, const ModelParams& m) {
  auto values = law.tabulate(layout, m);
  const long step = m.prime() == 2 ? 4 : static_cast<long>(m.prime());
  const PadicNumber factor = integer_like(1 + step, m.lambda());
  for (auto& v : values) v.z1 *= factor;
  return BoundaryLaw::table(std::move(values));
}

std::pair<PadicNumber, PadicNumber> compatibility_image(std::span<const BoundaryValue> values,
                                                        const TreeLayout& layout, Vertex x,
                                                        const ModelParams& m) {
  const PadicNumber one = one_like(m.lambda());
  PadicNumber r1 = m.lambda(), r2 = m.lambda();
  for (Vertex y : layout.children(x)) {
    const PadicNumber sum = values[y].z1 + values[y].z2;
    if (sum.is_zero()) throw padic::DomainError("z'_1 + z'_2 vanishes");
    r1 *= (one + values[y].z1) / sum;
    r2 *= (one + values[y].z2) / sum;
  }
  return {r1, r2};
}

PadicNumber hamiltonian(const Configuration& c, const ModelParams& m) {
  const std::size_t count = occupied_count(c);
  if (count == 0) return PadicNumber::exact_zero(m.prime(), m.precision());
  return integer_like(static_cast<long>(count), m.lambda()) * padic::log_p(m.lambda());
}

PadicNumber unnormalized_weight(const Configuration& c, const ModelParams& m,
                                const BoundaryLaw& b) {
  if (!is_admissible(c)) throw std::invalid_argument("configuration is not admissible");
  const TreeLayout& layout = c.layout();
  const auto values = b.tabulate(layout, m);
  PadicNumber w = padic::pow(m.lambda(), static_cast<unsigned>(occupied_count(c)));
  for (Vertex x : layout.sphere(layout.depth())) w *= weights_at(values[x], m)[c[x]];
  return w;
}

PadicNumber partition_function(const ModelParams& m, const BoundaryLaw& b, int n,
                               std::size_t cap) {
  return checked_partition(VolumeWeights(m, b, n, cap).total());
}

MeasureValue measure(const Configuration& c, const ModelParams& m, const BoundaryLaw& b,
                     std::size_t cap) {
  const int n = c.layout().depth();
  const PadicNumber z = partition_function(m, b, n, cap);
  return {unnormalized_weight(c, m, b) / z, n};
}

ConsistencyReport check_consistency(const ModelParams& m, const BoundaryLaw& b, int n,
                                    std::size_t cap) {
  if (n < 1) throw std::invalid_argument("consistency needs n >= 1");
  const VolumeWeights outer(m, b, n, cap);
  const VolumeWeights inner(m, b, n - 1, cap);
  const PadicNumber z_outer = checked_partition(outer.total());
  const PadicNumber z_inner = checked_partition(inner.total());
  const std::size_t prefix = outer.layout().ball_size(n - 1);

  std::map<std::string, PadicNumber> marginal;
  for (std::size_t i = 0; i < outer.keys().size(); ++i) {
    std::string key = outer.keys()[i].substr(0, prefix);
    auto it = marginal.find(key);
    if (it == marginal.end()) {
      marginal.emplace(std::move(key), outer.weights()[i]);
    } else {
      it->second += outer.weights()[i];
    }
  }

  ConsistencyReport report;
  report.volume = n;
  report.max_defect_norm = Norm::zero(m.prime());
  report.passed = true;
  for (std::size_t i = 0; i < inner.keys().size(); ++i) {
    auto it = marginal.find(inner.keys()[i]);
    PadicNumber lhs = it == marginal.end()
                          ? PadicNumber::exact_zero(m.prime(), m.precision())
                          : it->second / z_outer;
    PadicNumber defect = lhs - inner.weights()[i] / z_inner;
    report.max_defect_norm = padic::max_norm(report.max_defect_norm, defect.norm());
    report.passed = report.passed && defect.is_zero();
    ++report.checked;
  }
  return report;
}

CompatibilityReport verify_compatibility(const BoundaryLaw& b, const ModelParams& m, int depth) {
  if (depth < 1) throw std::invalid_argument("compatibility needs depth >= 1");
  const TreeLayout layout = TreeLayout::build(m.order(), depth);
  const auto values = b.tabulate(layout, m);
  CompatibilityReport report;
  report.depth = depth;
  report.max_residual_norm = Norm::zero(m.prime());
  report.passed = true;
  for (Vertex x = 0; x < layout.ball_size(depth - 1); ++x) {
    auto [r1, r2] = compatibility_image(values, layout, x, m);
    const PadicNumber d1 = values[x].z1 - r1;
    const PadicNumber d2 = values[x].z2 - r2;
    const Norm n = padic::max_norm(d1.norm(), d2.norm());
    report.residuals.emplace_back(x, n);
    report.max_residual_norm = padic::max_norm(report.max_residual_norm, n);
    report.passed = report.passed && d1.is_zero() && d2.is_zero();
  }
  return report;
}

PadicNumber local_factor(const BoundaryLaw& b, const ModelParams& m, const TreeLayout& layout,
                         Vertex x) {
  const auto values = b.tabulate(layout, m);
  auto [r1, r2] = compatibility_image(values, layout, x, m);
  if (!(values[x].z1 - r1).is_zero() || !(values[x].z2 - r2).is_zero()) {
    throw padic::DomainError("compatibility equation fails at vertex " + std::to_string(x));
  }
  return raw_local_factor(values, layout, x);
}

RecursionReport verify_partition_recursion(const ModelParams& m, const BoundaryLaw& b, int n,
                                           std::size_t cap) {
  if (n < 0) throw std::invalid_argument("volume must be >= 0");
  const VolumeWeights next(m, b, n + 1, cap);
  const VolumeWeights current(m, b, n, cap);
  PadicNumber a = one_like(m.lambda());
  for (Vertex x : next.layout().sphere(n)) a *= raw_local_factor(next.values(), next.layout(), x);

  RecursionReport report{n, next.total(), a * current.total(), Norm::zero(m.prime()), false};
  const PadicNumber diff = report.next_partition - report.product;
  report.difference_norm = diff.norm();
  report.passed = diff.is_zero();
  return report;
}

BoundednessReport boundedness_norms(const ModelParams& m, const BoundaryLaw& b, int n,
                                    std::size_t cap) {
  if (n < 0) throw std::invalid_argument("volume must be >= 0");
  const auto compat = verify_compatibility(b, m, std::max(n, 1));
  if (!compat.passed) {
    throw padic::DomainError("boundary law violates the compatibility equation (max residual " +
                             compat.max_residual_norm.str() + ")");
  }
  BoundednessReport report;
  report.volume = n;
  const Prime p = m.prime();
  const TreeLayout layout = TreeLayout::build(m.order(), n);
  if (layout.size() <= cap) {
    const VolumeWeights vw(m, b, n, cap);
    const PadicNumber z = checked_partition(vw.total());
    report.znorm = z.norm();
    for (std::size_t i = 0; i < vw.weights().size(); ++i) {
      const Norm mu = (vw.weights()[i] / z).norm();
      if (i == 0) {
        report.munorm = mu;
      } else if (!(mu == report.munorm)) {
        report.common_munorm = false;
        report.munorm = padic::max_norm(report.munorm, mu);
      }
    }
  } else {
    // Z_n = Z_0 * prod_{x in V_{n-1}} a_z(x); every weight is a unit.
    const auto values = b.tabulate(layout, m);
    const auto z0 = weights_at(values[0], m);
    PadicNumber z = z0[0] + m.lambda() * (z0[1] + z0[2]);
    for (Vertex x = 0; x < layout.ball_size(n - 1); ++x) z *= raw_local_factor(values, layout, x);
    z = checked_partition(z);
    report.znorm = z.norm();
    report.munorm = Norm::exact(p, -report.znorm.exponent);
  }
  const long inner = static_cast<long>(layout.ball_size(n - 1));
  const long e = p == 2 ? -static_cast<long>(m.order()) * inner : 0;
  report.predicted_znorm = Norm::exact(p, e);
  report.predicted_munorm = Norm::exact(p, -e);
  report.bounded = p != 2;
  report.matches_prediction = report.common_munorm && report.znorm == report.predicted_znorm &&
                              report.munorm == report.predicted_munorm;
  return report;
}

Transition detect_transition(const ModelParams& m, std::span<const BoundaryLaw> ti_laws,
                             std::span<const BoundaryLaw> periodic_laws) {
  if (m.prime() == 2) return Transition::None;
  return ti_laws.size() + periodic_laws.size() >= 2 ? Transition::Quasi : Transition::None;
}

const char* to_string(Transition t) { return t == Transition::Quasi ? "quasi" : "none"; }

}  // namespace hcgibbs

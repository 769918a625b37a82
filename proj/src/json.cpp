#include "hcgibbs/json.hpp"

namespace hcgibbs {

namespace {

const char* kind_name(PadicNumber::Kind k) {
  switch (k) {
    case PadicNumber::Kind::ExactZero: return "exact_zero";
    case PadicNumber::Kind::ZeroToPrecision: return "zero_to_precision";
    case PadicNumber::Kind::Nonzero: return "nonzero";
  }
  return "nonzero";
}

PadicNumber value_from_json(const Json& j, Prime p, int precision) {
  if (j.is_string()) return padic::parse_padic(j.get<std::string>(), p, precision);
  PadicNumber x = padic_from_json(j);
  if (x.prime() != p) throw padic::PrimeMismatch("table entry uses another prime");
  return x;
}

}  // namespace

Json to_json(const PadicNumber& x) {
  Json j;
  j["p"] = x.prime();
  j["kind"] = kind_name(x.kind());
  j["valuation"] = x.is_exact_zero() ? Json(nullptr) : Json(x.valuation());
  j["digits"] = x.is_nonzero() ? Json(x.digits()) : Json::array();
  j["precision"] = x.precision();
  if (x.is_exact()) j["exact"] = x.exact_value()->get_str();
  return j;
}

PadicNumber padic_from_json(const Json& j) {
  const auto p = j.at("p").get<Prime>();
  const int precision = j.at("precision").get<int>();
  if (j.contains("exact")) {
    return PadicNumber::from_rational(mpq_class(j["exact"].get<std::string>()), p, precision);
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "exact_zero") return PadicNumber::exact_zero(p, precision);
  if (kind == "zero_to_precision") {
    return PadicNumber::zero_to_precision(p, j.at("valuation").get<long>(), precision);
  }
  if (kind != "nonzero") throw std::invalid_argument("unknown p-adic kind '" + kind + "'");
  const auto digits = j.at("digits").get<std::vector<unsigned>>();
  return PadicNumber::from_digits(p, j.at("valuation").get<long>(), digits);
}

Json to_json(const TISolution& s) {
  return {{"z1_digits", to_json(s.z1)},
          {"z2_digits", to_json(s.z2)},
          {"residual_norm", s.residual.str()},
          {"solves", s.solves}};
}

Json to_json(const PeriodicSolution& s, const ModelParams& m) {
  const PadicNumber one = PadicNumber::from_integer(1, m.prime(), m.precision());
  const PadicNumber two = PadicNumber::from_integer(2, m.prime(), m.precision());
  const PadicNumber product = s.plus * s.minus - one;
  const PadicNumber sum = m.lambda() * (s.plus + s.minus) - two * (two - m.lambda());
  const PadicNumber cycle = period_map(m, s.plus) - s.minus;
  return {{"z_plus", to_json(s.plus)},
          {"z_minus", to_json(s.minus)},
          {"vieta_product_defect", product.norm().str()},
          {"vieta_sum_defect", sum.norm().str()},
          {"vieta_ok", product.is_zero() && sum.is_zero()},
          {"two_cycle_ok", cycle.is_zero() && !(period_map(m, s.plus) - s.plus).is_zero()},
          {"per_system", to_json(verify_per_system(s, m))}};
}

Json to_json(const PerSystemReport& r) {
  Json residuals = Json::array();
  for (const auto& n : r.residuals) residuals.push_back(n.str());
  return {{"residual_norms", residuals},
          {"max_residual_norm", r.max_residual.str()},
          {"slack", r.slack.str()},
          {"equations_hold", r.equations_hold},
          {"distinct", r.distinct},
          {"passed", r.passed}};
}

Json to_json(const CompatibilityReport& r) {
  return {{"depth", r.depth}, {"max_residual_norm", r.max_residual_norm.str()},
          {"passed", r.passed}};
}

Json to_json(const ConsistencyReport& r) {
  return {{"n", r.volume},
          {"checked", r.checked},
          {"max_defect_norm", r.max_defect_norm.str()},
          {"passed", r.passed}};
}

Json to_json(const RecursionReport& r) {
  return {{"n", r.volume},
          {"next_partition", to_json(r.next_partition)},
          {"product", to_json(r.product)},
          {"difference_norm", r.difference_norm.str()},
          {"passed", r.passed}};
}

Json to_json(const BoundednessReport& r) {
  return {{"n", r.volume},
          {"znorm", r.znorm.str()},
          {"munorm", r.munorm.str()},
          {"common_munorm", r.common_munorm},
          {"bounded", r.bounded},
          {"predicted_znorm", r.predicted_znorm.str()},
          {"predicted_munorm", r.predicted_munorm.str()},
          {"matches_prediction", r.matches_prediction}};
}

std::vector<BoundaryValue> boundary_table_from_json(const Json& j, Prime p, int precision) {
  if (!j.is_array()) throw std::invalid_argument("boundary table must be a JSON array");
  std::vector<BoundaryValue> out;
  for (const auto& row : j) {
    PadicNumber gauge = row.contains("gauge") ? value_from_json(row["gauge"], p, precision)
                                              : PadicNumber::from_integer(1, p, precision);
    out.push_back({std::move(gauge), value_from_json(row.at("z1"), p, precision),
                   value_from_json(row.at("z2"), p, precision)});
  }
  return out;
}

}  // namespace hcgibbs

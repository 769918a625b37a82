#pragma once

#include <json.hpp>

#include "hcgibbs/gibbs.hpp"
#include "hcgibbs/solvers.hpp"

namespace hcgibbs {

using Json = nlohmann::ordered_json;

/// {p, kind, valuation, digits, precision[, exact]}; digits are x_0, x_1, ...
/// of the unit part.
Json to_json(const PadicNumber& x);
PadicNumber padic_from_json(const Json& j);

Json to_json(const TISolution& s);
Json to_json(const PeriodicSolution& s, const ModelParams& m);
Json to_json(const PerSystemReport& r);
Json to_json(const CompatibilityReport& r);
Json to_json(const ConsistencyReport& r);
Json to_json(const RecursionReport& r);
Json to_json(const BoundednessReport& r);

/// Boundary-law table file: an array of {"z1", "z2"[, "gauge"]}, each value a
/// string accepted by parse_padic or an object produced by to_json.
std::vector<BoundaryValue> boundary_table_from_json(const Json& j, Prime p, int precision);

}  // namespace hcgibbs

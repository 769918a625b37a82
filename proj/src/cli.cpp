#include "hcgibbs/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "hcgibbs/json.hpp"

namespace hcgibbs {

namespace {

struct RunConfig {
  std::uint64_t p = 5;
  int k = 2;
  int n = 2;
  int precision = padic::kDefaultPrecision;
  std::string lambda = "1";
  std::string law = "periodic";
  bool perturb = false;
  std::string format = "text";
  std::size_t cap = kDefaultEnumerationCap;
  std::uint64_t seed = 1;
  std::size_t samples = 500;
  std::string which;
  std::string file;
};

ModelParams make_model(const RunConfig& cfg) {
  const Prime p = padic::checked_prime(cfg.p);
  if (cfg.precision < 16) throw std::invalid_argument("precision must be at least 16");
  return ModelParams(EpElement(padic::parse_padic(cfg.lambda, p, cfg.precision)), cfg.k);
}

Json header(const RunConfig& cfg, const ModelParams& m) {
  return {{"lambda", cfg.lambda}, {"p", m.prime()}, {"k", m.order()},
          {"precision", m.precision()}};
}

std::optional<PeriodicSolution> periodic_if_defined(const ModelParams& m) {
  if (m.order() != 2) return std::nullopt;
  return solve_periodic(m);
}

Transition transition_of(const ModelParams& m, const TIClassification& c,
                         const std::optional<PeriodicSolution>& periodic) {
  std::vector<BoundaryLaw> ti, pl;
  for (const auto& w : c.witnesses) ti.push_back(w.law());
  if (periodic) {
    pl.push_back(periodic->law());
    pl.push_back(periodic->swapped_law());
  }
  return detect_transition(m, ti, pl);
}

// --- text rendering --------------------------------------------------------

bool is_padic(const Json& j) { return j.is_object() && j.contains("kind") && j.contains("digits"); }

void render(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, v] : j.items()) {
    out << pad << key << ":";
    if (is_padic(v)) {
      const PadicNumber x = padic_from_json(v);
      out << ' ' << x.str();
      if (x.is_exact() && x.is_nonzero()) out << " = " << x.approximation().with_precision(12).str();
      out << '\n';
    } else if (v.is_object()) {
      out << '\n';
      render(v, out, indent + 2);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << '\n';
      for (const auto& item : v) {
        out << pad << "  -\n";
        render(item, out, indent + 4);
      }
    } else if (v.is_string()) {
      out << ' ' << v.get<std::string>() << '\n';
    } else {
      out << ' ' << v.dump() << '\n';
    }
  }
}

void emit(const RunConfig& cfg, const Json& j, std::ostream& out) {
  if (cfg.format == "json") {
    out << j.dump(2) << '\n';
  } else {
    render(j, out, 0);
  }
}

// --- commands --------------------------------------------------------------

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const ModelParams m = make_model(cfg);
  const TIClassification c = classify_ti(m);
  const auto periodic = periodic_if_defined(m);

  Json j = header(cfg, m);
  j["precheck"] = to_string(c.precheck);
  j["verdict"] = to_string(c.verdict);
  j["region_ti"] = c.region ? Json(*c.region) : Json(nullptr);
  j["region_periodic"] = sqrt_one_minus_lambda_region(EpElement(m.lambda()));
  Json witnesses = Json::array();
  for (const auto& w : c.witnesses) witnesses.push_back(to_json(w));
  j["witnesses"] = witnesses;
  j["periodic"] = periodic ? to_json(*periodic, m) : Json(nullptr);
  j["transition"] = to_string(transition_of(m, c, periodic));
  if (!c.note.empty()) j["note"] = c.note;
  emit(cfg, j, out);
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const ModelParams m = make_model(cfg);
  Json j = header(cfg, m);
  j["which"] = cfg.which;
  if (cfg.which == "ti") {
    try {
      j["diagonal"] = to_json(solve_ti_diagonal(m));
    } catch (const MethodNotApplicable& e) {
      j["diagonal"] = nullptr;
      j["diagonal_reason"] = e.what();
    }
    if (m.order() == 2 && m.prime() > 3) {
      const bool region = lambda_region_ti(EpElement(m.lambda()));
      const auto pair = solve_ti_offdiagonal(m);
      j["region_ti"] = region;
      j["status"] = pair ? "Pair" : "Empty";
      j["offdiagonal"] = pair ? Json::array({to_json(pair->plus_minus), to_json(pair->minus_plus)})
                              : Json::array();
      if (!pair) j["reason"] = "16(lambda - 1) is outside the three-solution region";
    } else {
      j["status"] = "Empty";
      j["offdiagonal"] = nullptr;
      j["reason"] = "off-diagonal laws are constructed for k = 2 and p > 3 only";
    }
  } else {
    if (m.order() != 2) throw MethodNotApplicable("periodic laws are constructed for k = 2 only");
    const auto sol = solve_periodic(m);
    j["status"] = sol ? "Found" : "Empty";
    j["periodic"] = sol ? to_json(*sol, m) : Json(nullptr);
    if (!sol) {
      const PadicNumber gap = m.lambda() - PadicNumber::from_integer(1, m.prime(), m.precision());
      j["reason"] = gap.is_zero() ? "lambda = 1: the two-cycle collapses"
                                  : "1 - lambda is not a square in Q_p";
    }
  }
  emit(cfg, j, out);
  return kExitOk;
}

BoundaryLaw build_law(const RunConfig& cfg, const ModelParams& m) {
  if (cfg.law == "ti-diagonal") return solve_ti_diagonal(m).law();
  if (cfg.law == "ti-offdiag") {
    auto pair = solve_ti_offdiagonal(m);
    if (!pair) throw std::invalid_argument("no off-diagonal TI law for this lambda");
    return pair->plus_minus.law();
  }
  if (cfg.law == "periodic") {
    auto sol = periodic_if_defined(m);
    if (!sol) throw std::invalid_argument("no period-two law for this lambda and k");
    return sol->law();
  }
  if (cfg.law == "ti-trivial") {
    if (!(m.lambda() - PadicNumber::from_integer(1, m.prime(), m.precision())).is_zero()) {
      throw std::invalid_argument("the trivial law needs lambda = 1");
    }
    const PadicNumber one = PadicNumber::from_integer(1, m.prime(), m.precision());
    return BoundaryLaw::translation_invariant(one, one);
  }
  if (cfg.law.rfind("table:", 0) == 0) {
    const std::string path = cfg.law.substr(6);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open boundary table '" + path + "'");
    return BoundaryLaw::table(boundary_table_from_json(Json::parse(in), m.prime(), m.precision()));
  }
  throw std::invalid_argument("unknown law '" + cfg.law + "'");
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const ModelParams m = make_model(cfg);
  if (cfg.n < 0) throw std::invalid_argument("--n must be >= 0");
  const int depth = std::max(cfg.n, 1);
  BoundaryLaw law = build_law(cfg, m);
  if (cfg.perturb) law = perturbed(law, TreeLayout::build(m.order(), depth), m);

  const auto compat = verify_compatibility(law, m, depth);
  std::optional<ConsistencyReport> consistency;
  if (cfg.n >= 1) consistency = check_consistency(m, law, cfg.n, cfg.cap);
  const auto recursion = verify_partition_recursion(m, law, depth - 1, cfg.cap);
  std::optional<BoundednessReport> bounds;
  if (compat.passed) bounds = boundedness_norms(m, law, cfg.n, cfg.cap);

  std::optional<Transition> transition;
  try {
    transition = transition_of(m, classify_ti(m), periodic_if_defined(m));
  } catch (const MethodNotApplicable&) {
  }

  const bool passed = compat.passed && (!consistency || consistency->passed) && recursion.passed;
  Json j = header(cfg, m);
  j["n"] = cfg.n;
  j["law"] = cfg.law;
  j["perturbed"] = cfg.perturb;
  j["znorm"] = bounds ? Json(bounds->znorm.str()) : Json(nullptr);
  j["munorm"] = bounds ? Json(bounds->munorm.str()) : Json(nullptr);
  j["max_defect_norm"] = consistency ? Json(consistency->max_defect_norm.str()) : Json(nullptr);
  j["bounded"] = bounds ? Json(bounds->bounded) : Json(nullptr);
  j["transition"] = transition ? Json(to_string(*transition)) : Json(nullptr);
  j["compatibility"] = to_json(compat);
  j["consistency"] = consistency ? to_json(*consistency) : Json(nullptr);
  j["recursion"] = to_json(recursion);
  j["boundedness"] = bounds ? to_json(*bounds) : Json(nullptr);
  j["passed"] = passed;
  emit(cfg, j, out);
  return passed ? kExitOk : kExitCheckFailed;
}

Json scan_row(const RunConfig& base, const std::string& lambda) {
  RunConfig cfg = base;
  cfg.lambda = lambda;
  Json row = {{"lambda", lambda}};
  try {
    const ModelParams m = make_model(cfg);
    const TIClassification c = classify_ti(m);
    const auto periodic = periodic_if_defined(m);
    row["verdict"] = to_string(c.verdict);
    row["region_ti"] = c.region ? Json(*c.region) : Json(nullptr);
    row["region_periodic"] = sqrt_one_minus_lambda_region(EpElement(m.lambda()));
    row["witnesses"] = c.witnesses.size();
    row["periodic"] = periodic.has_value();
    row["transition"] = to_string(transition_of(m, c, periodic));
  } catch (const std::exception& e) {
    row["error"] = e.what();
  }
  return row;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(cfg.file);
  if (!in) throw std::invalid_argument("cannot open '" + cfg.file + "'");
  Json rows = Json::array();
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    rows.push_back(scan_row(cfg, line.substr(first, last - first + 1)));
  }
  if (cfg.format == "json") {
    out << rows.dump(2) << '\n';
    return kExitOk;
  }
  auto cell = [](const Json& row, const char* key) -> std::string {
    if (!row.contains(key) || row[key].is_null()) return "-";
    return row[key].is_string() ? row[key].get<std::string>() : row[key].dump();
  };
  out << std::left << std::setw(24) << "lambda" << std::setw(9) << "verdict" << std::setw(10)
      << "region_ti" << std::setw(9) << "periodic" << std::setw(11) << "transition" << "error\n";
  for (const auto& row : rows) {
    out << std::setw(24) << cell(row, "lambda") << std::setw(9) << cell(row, "verdict")
        << std::setw(10) << cell(row, "region_ti") << std::setw(9) << cell(row, "periodic")
        << std::setw(11) << cell(row, "transition") << (row.contains("error") ? cell(row, "error") : "")
        << '\n';
  }
  return kExitOk;
}

int cmd_injectivity(const RunConfig& cfg, std::ostream& out) {
  const Prime p = padic::checked_prime(cfg.p);
  const auto r = F_injectivity_check(cfg.samples, p, cfg.seed, cfg.precision);
  Json j = {{"p", p},
            {"samples", r.samples},
            {"seed", cfg.seed},
            {"counterexamples", r.counterexamples},
            {"inverse_failures", r.inverse_failures},
            {"passed", r.passed}};
  emit(cfg, j, out);
  return r.passed ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"p-adic Gibbs measures of the three-state hard-core model on Cayley trees",
               "hcgibbs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--p", cfg.p, "prime")->envname("HCGIBBS_P");
  app.add_option("--k", cfg.k, "order of the Cayley tree")->envname("HCGIBBS_K");
  app.add_option("--n", cfg.n, "volume depth")->envname("HCGIBBS_N");
  app.add_option("--precision", cfg.precision, "relative p-adic precision N (>= 16)")
      ->envname("HCGIBBS_PRECISION");
  app.add_option("--lambda", cfg.lambda, "activity: n/d or [x0,x1,...]@v")
      ->envname("HCGIBBS_LAMBDA")
      ->allow_extra_args(false);
  app.add_option("--law", cfg.law, "ti-diagonal|ti-offdiag|periodic|ti-trivial|table:FILE")
      ->envname("HCGIBBS_LAW");
  app.add_flag("--perturb", cfg.perturb, "scale z'_1 by 1 + p before verifying");
  app.add_option("--format", cfg.format, "text|json")
      ->envname("HCGIBBS_FORMAT")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--cap", cfg.cap, "largest volume (vertices) enumerated")->envname("HCGIBBS_CAP");
  app.add_option("--seed", cfg.seed, "random seed")->envname("HCGIBBS_SEED");
  app.add_option("--samples", cfg.samples, "sample count")->envname("HCGIBBS_SAMPLES");

  auto* classify = app.add_subcommand("classify", "classify TI laws and phase transition");
  auto* solve = app.add_subcommand("solve", "construct TI or period-two boundary laws");
  solve->add_option("which", cfg.which, "ti|periodic")
      ->required()
      ->check(CLI::IsMember({"ti", "periodic"}));
  auto* verify = app.add_subcommand("verify", "check a boundary law on finite volumes");
  auto* scan = app.add_subcommand("scan", "classify every lambda listed in a file");
  scan->add_option("file", cfg.file, "one lambda per line")->required();
  auto* injectivity = app.add_subcommand("injectivity", "randomized injectivity test of F");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (classify->parsed()) return cmd_classify(cfg, out);
    if (solve->parsed()) return cmd_solve(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (scan->parsed()) return cmd_scan(cfg, out);
    if (injectivity->parsed()) return cmd_injectivity(cfg, out);
  } catch (const ResourceCapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitResourceCap;
  } catch (const padic::PrecisionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const MethodNotApplicable& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitBadInput;
}

}  // namespace hcgibbs

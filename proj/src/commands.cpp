#include "polysep/commands.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "polysep/errors.hpp"
#include "polysep/generate.hpp"

namespace polysep {

namespace {

Json error_json(const std::string& kind, const std::string& message) {
  return Json{{"kind", kind}, {"message", message}};
}

Json optional_number(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

const CMatrix& require_matrix(const std::optional<CMatrix>& m, const char* name) {
  if (!m) throw ParseError(std::string("config: missing field '") + name + "'");
  return *m;
}

std::optional<GridBox> box_of(const ProblemConfig& cfg) {
  if (cfg.grid && cfg.grid->lower) return GridBox{*cfg.grid->lower, *cfg.grid->upper};
  return std::nullopt;
}

std::size_t resolution_of(const ProblemConfig& cfg) {
  return cfg.grid && cfg.grid->resolution ? *cfg.grid->resolution : kDefaultResolution;
}

Json box_json(const GridBox& b) {
  return Json{{"lower", complex_to_json(b.lower)}, {"upper", complex_to_json(b.upper)}};
}

std::size_t mask_cells(const GridRegion& g) {
  std::size_t n = 0;
  for (auto m : g.mask) n += m ? 1 : 0;
  return n;
}

GridBox doubled(const GridBox& b) {
  const cplx mid = 0.5 * (b.lower + b.upper);
  return {mid + 2.0 * (b.lower - mid), mid + 2.0 * (b.upper - mid)};
}

std::string base_name(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

Json eta_rows_json(const EtaEstimate& est) {
  Json rows = Json::array();
  for (const auto& r : est.rows) {
    rows.push_back(Json{{"degree", r.degree},
                        {"eta", r.best},
                        {"running_min", r.running_min},
                        {"spectral", r.best_spectral},
                        {"origin", r.best_origin},
                        {"polynomial", poly_to_json(r.best_poly)},
                        {"evaluated", r.evaluated},
                        {"skipped", r.skipped}});
  }
  return rows;
}

}  // namespace

std::pair<Json, int> classify_error(const std::exception& e) {
  const std::string msg = e.what();
  if (dynamic_cast<const SpectralOverlapError*>(&e))
    return {error_json("spectral-overlap", msg), kExitNotApplicable};
  if (dynamic_cast<const ApplicabilityError*>(&e))
    return {error_json("applicability", msg), kExitNotApplicable};
  if (dynamic_cast<const CertificateError*>(&e))
    return {error_json("certificate", msg), kExitNotApplicable};
  if (dynamic_cast<const ParseError*>(&e)) return {error_json("parse", msg), kExitFailure};
  if (dynamic_cast<const DivergenceError*>(&e)) return {error_json("divergence", msg), kExitFailure};
  if (dynamic_cast<const NumericalError*>(&e)) return {error_json("numerical", msg), kExitFailure};
  if (dynamic_cast<const SingularityError*>(&e)) return {error_json("singular", msg), kExitFailure};
  if (dynamic_cast<const ConditioningError*>(&e)) return {error_json("conditioning", msg), kExitFailure};
  if (dynamic_cast<const DimensionError*>(&e)) return {error_json("dimension", msg), kExitFailure};
  if (dynamic_cast<const InvalidArgument*>(&e)) return {error_json("invalid-argument", msg), kExitFailure};
  if (dynamic_cast<const RangeError*>(&e)) return {error_json("range", msg), kExitFailure};
  if (dynamic_cast<const Error*>(&e)) return {error_json("io", msg), kExitFailure};
  return {error_json("internal", msg), kExitFailure};
}

SylvesterProblem problem_from_config(const ProblemConfig& cfg) {
  SylvesterProblem prob;
  prob.a = require_matrix(cfg.a, "A");
  prob.b = require_matrix(cfg.b, "B");
  prob.c = require_matrix(cfg.c, "C");
  prob.method = method_from_string(cfg.method.value_or("oracle"));
  if (cfg.polynomial) prob.p = cfg.polynomial->to_poly();
  if (cfg.tol) prob.tol = *cfg.tol;
  prob.shift = cfg.shift;
  prob.margin = cfg.margin;
  prob.box = box_of(cfg);
  prob.resolution = resolution_of(cfg);
  prob.contour = cfg.contour;
  prob.order = cfg.order;
  prob.validate();
  return prob;
}

Json poly_to_json(const Poly& p) {
  Json j = Json::object();
  std::vector<cplx> rts;
  if (p.known_roots()) {
    rts = *p.known_roots();
  } else if (p.degree() >= 1) {
    rts = roots(p);
  }
  j["roots"] = complex_list_to_json(rts);
  j["coefficients"] = complex_list_to_json(p.coeffs());
  return j;
}

Json report_to_json(const SolveReport& r) {
  Json j = Json::object();
  j["method"] = to_string(r.method);
  j["X"] = matrix_to_json(r.x);
  j["residual"] = r.residual;
  j["N"] = r.order >= 0 ? Json(r.order) : Json(nullptr);
  j["iterations"] = r.iterations;
  j["bound"] = optional_number(r.bound);
  j["certificate"] = r.certificate.empty() ? Json(nullptr) : Json(r.certificate);
  Json d = Json::object();
  for (const auto& [k, v] : r.diagnostics) d[k] = v;
  j["diagnostics"] = std::move(d);
  return j;
}

Json certificate_to_json(const SeparationCertificate& c) {
  Json comp = Json::array();
  for (const auto& b : c.region.component_bounds())
    comp.push_back(Json{{"lower", complex_to_json(b.lower)}, {"upper", complex_to_json(b.upper)}, {"cells", b.cells}});
  return Json{{"kind", to_string(c.kind)},
              {"status", to_string(c.status)},
              {"margin", c.score},
              {"t", c.margin},
              {"norm", c.norm},
              {"level", c.level},
              {"cause", c.cause.empty() ? Json(nullptr) : Json(c.cause)},
              {"component_a", c.component_a},
              {"component_b", c.component_b},
              {"component_roots", c.component_roots},
              {"box", box_json(c.region.box)},
              {"resolution", c.region.nx},
              {"components", comp}};
}

CommandResult run_solve(const ProblemConfig& cfg) {
  const SylvesterProblem prob = problem_from_config(cfg);
  CommandResult out;
  out.report = Json{{"command", "solve"}, {"method", to_string(prob.method)}};
  try {
    const SolveReport r = solve(prob);
    const Json body = report_to_json(r);
    for (auto it = body.begin(); it != body.end(); ++it) out.report[it.key()] = it.value();
    if (!(r.residual <= prob.tol)) {
      std::ostringstream os;
      os << "residual " << r.residual << " exceeds tol " << prob.tol;
      out.report["error"] = error_json("residual", os.str());
      out.exit_code = kExitFailure;
    } else {
      out.report["error"] = nullptr;
    }
  } catch (const std::exception& e) {
    auto [err, code] = classify_error(e);
    for (const char* k : {"X", "residual", "N", "bound", "certificate"}) out.report[k] = nullptr;
    out.report["error"] = err;
    out.exit_code = code;
  }
  return out;
}

CommandResult run_region(const ProblemConfig& cfg, const std::string& stem) {
  const CMatrix& t = require_matrix(cfg.a, "A");
  if (!cfg.polynomial && cfg.eps.empty())
    throw InvalidArgument("region: a polynomial or eps values are required");
  const std::optional<GridBox> fixed = box_of(cfg);
  const std::size_t res = resolution_of(cfg);
  GridBox box = fixed ? *fixed : default_box(t, cfg.b ? *cfg.b : t);

  std::optional<Poly> p;
  double norm = 0.0, level = 0.0;
  if (cfg.polynomial) {
    p = cfg.polynomial->to_poly();
    if (p->degree() < 1) throw InvalidArgument("region: p must have degree at least 1");
    norm = op_norm((*p)(t));
    level = norm + cfg.margin.value_or(0.0);
  }
  std::optional<GridRegion> vp;
  std::vector<GridRegion> ps;
  for (int k = 0;; ++k) {
    bool touches = false;
    if (p) {
      vp = vp_grid(*p, level, box, res);
      touches = touches || vp->touches_border();
    }
    ps.clear();
    for (double e : cfg.eps) {
      ps.push_back(pseudospectrum_grid(t, e, box, res));
      touches = touches || ps.back().touches_border();
    }
    if (fixed || !touches || k >= 4) break;
    box = doubled(box);
  }

  CommandResult out;
  Json j{{"command", "region"}, {"box", box_json(box)}, {"resolution", res}};
  if (vp) {
    const std::string pgm = stem + "_vp.pgm", csv = stem + "_vp.csv";
    out.files.emplace_back(pgm, to_pgm(*vp));
    out.files.emplace_back(csv, to_csv(*vp));
    j["vp"] = Json{{"polynomial", poly_to_json(*p)},
                   {"norm", norm},
                   {"level", level},
                   {"components", vp->components},
                   {"cells", mask_cells(*vp)},
                   {"touches_border", vp->touches_border()},
                   {"pgm", base_name(pgm)},
                   {"csv", base_name(csv)}};
  } else {
    j["vp"] = nullptr;
  }
  Json pj = Json::array();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const std::string pgm = stem + "_ps" + std::to_string(k) + ".pgm";
    const std::string csv = stem + "_ps" + std::to_string(k) + ".csv";
    out.files.emplace_back(pgm, to_pgm(ps[k]));
    out.files.emplace_back(csv, to_csv(ps[k]));
    pj.push_back(Json{{"eps", cfg.eps[k]},
                      {"components", ps[k].components},
                      {"cells", mask_cells(ps[k])},
                      {"touches_border", ps[k].touches_border()},
                      {"pgm", base_name(pgm)},
                      {"csv", base_name(csv)}});
  }
  j["pseudospectra"] = std::move(pj);
  if (p && cfg.b) {
    SeparationOptions so;
    so.margin = cfg.margin.value_or(-1.0);
    so.box = fixed;
    so.resolution = res;
    const CMatrix c = cfg.c ? *cfg.c : CMatrix::zeros(t.rows(), cfg.b->rows());
    j["certificate"] = certificate_to_json(separation_certificate(*p, t, *cfg.b, c, so));
  } else {
    j["certificate"] = nullptr;
  }
  j["error"] = nullptr;
  out.report = std::move(j);
  return out;
}

CommandResult run_search(const ProblemConfig& cfg) {
  const CMatrix& a = require_matrix(cfg.a, "A");
  const CMatrix& b = require_matrix(cfg.b, "B");
  const CMatrix c = cfg.c ? *cfg.c : CMatrix::zeros(a.rows(), b.rows());
  SearchOptions so;
  std::optional<std::vector<cplx>> user;
  if (cfg.polynomial) {
    user = cfg.polynomial->roots ? *cfg.polynomial->roots : roots(cfg.polynomial->to_poly());
    so.roots = user;
  }
  if (cfg.max_degree) so.max_degree = *cfg.max_degree;
  if (cfg.margin) so.separation.margin = *cfg.margin;
  so.separation.box = box_of(cfg);
  so.separation.resolution = resolution_of(cfg);
  const SearchResult sr = search_separating_poly(a, b, c, so);
  const EtaEstimate eta = eta_estimate(a, b, so.max_degree);
  CommandResult out;
  out.report = Json{{"command", "search"},
                    {"user_roots", user ? complex_list_to_json(*user) : Json(nullptr)},
                    {"strategy", sr.strategy},
                    {"tried", sr.tried},
                    {"polynomial", poly_to_json(sr.p)},
                    {"certificate", certificate_to_json(sr.certificate)},
                    {"eta", eta_rows_json(eta)},
                    {"error", nullptr}};
  return out;
}

CommandResult run_eta(const ProblemConfig& cfg) {
  const CMatrix& a = require_matrix(cfg.a, "A");
  const CMatrix& b = require_matrix(cfg.b, "B");
  const int dmax = cfg.max_degree.value_or(8);
  const EtaEstimate eta = eta_estimate(a, b, dmax);
  CommandResult out;
  out.report = Json{{"command", "eta"},
                    {"max_degree", dmax},
                    {"rows", eta_rows_json(eta)},
                    {"skipped", eta.skipped},
                    {"error", nullptr}};
  return out;
}

int run_command(const std::string& command, const CommandOptions& opts, std::ostream& out,
                std::ostream& err) {
  CommandResult result;
  std::optional<std::string> target = opts.out;
  try {
    if (command == "generate") {
      ProblemConfig base;
      if (opts.config_path) base = load_config(*opts.config_path);
      const std::string family = opts.family ? *opts.family : base.family.value_or("");
      if (family.empty()) throw InvalidArgument("generate: a family is required (--family)");
      const std::size_t size = opts.size ? *opts.size : base.size.value_or(4);
      const std::uint64_t seed = opts.seed ? *opts.seed : base.seed.value_or(1);
      const std::string text = dump(to_json(generate(family, size, seed)));
      if (target) write_file(*target, text);
      else out << text;
      return kExitOk;
    }
    if (!opts.config_path) throw ParseError("missing --config");
    ProblemConfig cfg = load_config(*opts.config_path);
    if (opts.method) cfg.method = *opts.method;
    if (opts.tol) {
      if (!(*opts.tol > 0.0)) throw InvalidArgument("--tol must be positive");
      cfg.tol = *opts.tol;
    }
    if (opts.resolution) {
      if (*opts.resolution < 16) throw InvalidArgument("--resolution must be at least 16");
      if (!cfg.grid) cfg.grid = GridConfig{};
      cfg.grid->resolution = *opts.resolution;
    }
    if (opts.seed) cfg.seed = *opts.seed;
    if (!target && cfg.output) target = cfg.output;

    if (command == "solve") {
      result = run_solve(cfg);
    } else if (command == "region") {
      if (!target) throw InvalidArgument("region: --out is required");
      result = run_region(cfg, *target);
      target = *target + ".json";
    } else if (command == "search") {
      result = run_search(cfg);
    } else if (command == "eta") {
      result = run_eta(cfg);
    } else {
      throw InvalidArgument("unknown command '" + command + "'");
    }
  } catch (const std::exception& e) {
    auto [ej, code] = classify_error(e);
    result.report = Json{{"command", command}, {"error", ej}};
    result.exit_code = code;
    result.files.clear();
    if (command == "region" && target) target = *target + ".json";
  }

  try {
    for (const auto& [path, content] : result.files) write_file(path, content);
    if (target) write_file(*target, dump(result.report));
    else out << dump(result.report);
  } catch (const std::exception& e) {
    err << "polysep: " << e.what() << "\n";
    return kExitFailure;
  }
  if (!result.report["error"].is_null())
    err << "polysep " << command << ": " << result.report["error"]["message"].get<std::string>() << "\n";
  return result.exit_code;
}

}  // namespace polysep

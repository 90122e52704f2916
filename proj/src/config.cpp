#include "polysep/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "polysep/errors.hpp"

namespace polysep {

namespace {

const std::set<std::string> kTopKeys{"A",     "B",      "C",       "method", "polynomial",
                                     "tol",   "grid",   "margin",  "eps",    "shift",
                                     "order", "contour", "max_degree", "seed", "family",
                                     "size",  "stamp",  "output"};

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ParseError(where + ": unknown field '" + it.key() + "'");
}

const Json& require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  return j;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

double positive(const Json& j, const std::string& where) {
  const double v = number(j, where);
  if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(where + ": expected a positive number");
  return v;
}

std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<cplx> complex_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(complex_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

bool same(const std::optional<CMatrix>& x, const std::optional<CMatrix>& y) {
  if (x.has_value() != y.has_value()) return false;
  if (!x) return true;
  return x->rows() == y->rows() && x->cols() == y->cols() && x->eigen() == y->eigen();
}

bool same(const std::optional<CircleSet>& x, const std::optional<CircleSet>& y) {
  if (x.has_value() != y.has_value()) return false;
  if (!x) return true;
  if (x->size() != y->size()) return false;
  for (std::size_t i = 0; i < x->size(); ++i)
    if ((*x)[i].center != (*y)[i].center || (*x)[i].radius != (*y)[i].radius) return false;
  return true;
}

}  // namespace

Poly PolySpec::to_poly() const {
  if (roots && coefficients) throw InvalidArgument("polynomial: give roots or coefficients, not both");
  if (roots) {
    if (roots->empty()) throw InvalidArgument("polynomial: empty root list");
    return Poly::from_roots(*roots, leading);
  }
  if (coefficients) {
    Poly p(*coefficients);
    if (p.degree() < 0) throw InvalidArgument("polynomial: zero polynomial");
    return p;
  }
  throw InvalidArgument("polynomial: neither roots nor coefficients given");
}

bool ProblemConfig::operator==(const ProblemConfig& o) const {
  return same(a, o.a) && same(b, o.b) && same(c, o.c) && method == o.method &&
         polynomial == o.polynomial && tol == o.tol && grid == o.grid && margin == o.margin &&
         eps == o.eps && shift == o.shift && order == o.order && same(contour, o.contour) &&
         max_degree == o.max_degree && seed == o.seed && family == o.family && size == o.size &&
         stamp == o.stamp && output == o.output;
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json complex_list_to_json(const std::vector<cplx>& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(complex_to_json(z));
  return out;
}

Json matrix_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

cplx complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": complex numbers are two-element [re, im] arrays");
  const cplx z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw ParseError(where + ": non-finite value");
  return z;
}

CMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw ParseError(where + "[0]: expected a non-empty row");
  const std::size_t cols = j[0].size();
  std::vector<cplx> data;
  data.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rw = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError(rw + ": ragged matrix row");
    for (std::size_t k = 0; k < cols; ++k)
      data.push_back(complex_from_json(j[i][k], rw + "[" + std::to_string(k) + "]"));
  }
  return CMatrix(rows, cols, data);
}

ProblemConfig parse_config(const Json& j) {
  require_object(j, "config");
  reject_unknown(j, kTopKeys, "config");
  ProblemConfig cfg;
  if (j.contains("A")) cfg.a = matrix_from_json(j["A"], "A");
  if (j.contains("B")) cfg.b = matrix_from_json(j["B"], "B");
  if (j.contains("C")) cfg.c = matrix_from_json(j["C"], "C");
  if (j.contains("method")) cfg.method = text(j["method"], "method");
  if (j.contains("polynomial")) {
    const Json& p = require_object(j["polynomial"], "polynomial");
    reject_unknown(p, {"roots", "coefficients", "leading"}, "polynomial");
    PolySpec ps;
    if (p.contains("roots")) ps.roots = complex_list(p["roots"], "polynomial.roots");
    if (p.contains("coefficients"))
      ps.coefficients = complex_list(p["coefficients"], "polynomial.coefficients");
    if (p.contains("leading")) ps.leading = complex_from_json(p["leading"], "polynomial.leading");
    if (ps.roots.has_value() == ps.coefficients.has_value())
      throw ParseError("polynomial: exactly one of 'roots' or 'coefficients' is required");
    if (ps.coefficients && p.contains("leading"))
      throw ParseError("polynomial: 'leading' only applies to 'roots'");
    if (ps.roots && ps.roots->empty()) throw ParseError("polynomial.roots: empty list");
    cfg.polynomial = std::move(ps);
  }
  if (j.contains("tol")) cfg.tol = positive(j["tol"], "tol");
  if (j.contains("grid")) {
    const Json& g = require_object(j["grid"], "grid");
    reject_unknown(g, {"lower", "upper", "resolution"}, "grid");
    GridConfig gc;
    if (g.contains("lower")) gc.lower = complex_from_json(g["lower"], "grid.lower");
    if (g.contains("upper")) gc.upper = complex_from_json(g["upper"], "grid.upper");
    if (gc.lower.has_value() != gc.upper.has_value())
      throw ParseError("grid: 'lower' and 'upper' must be given together");
    if (gc.lower && !(gc.lower->real() < gc.upper->real() && gc.lower->imag() < gc.upper->imag()))
      throw ParseError("grid: 'lower' must be below and left of 'upper'");
    if (g.contains("resolution")) {
      const auto r = integer(g["resolution"], "grid.resolution");
      if (r < 16) throw ParseError("grid.resolution: must be at least 16");
      gc.resolution = static_cast<std::size_t>(r);
    }
    cfg.grid = gc;
  }
  if (j.contains("margin")) cfg.margin = positive(j["margin"], "margin");
  if (j.contains("eps")) {
    if (!j["eps"].is_array()) throw ParseError("eps: expected an array of positive numbers");
    for (std::size_t i = 0; i < j["eps"].size(); ++i)
      cfg.eps.push_back(positive(j["eps"][i], "eps[" + std::to_string(i) + "]"));
  }
  if (j.contains("shift")) cfg.shift = number(j["shift"], "shift");
  if (j.contains("order")) {
    const auto n = integer(j["order"], "order");
    if (n < 0) throw ParseError("order: must be non-negative");
    cfg.order = static_cast<int>(n);
  }
  if (j.contains("contour")) {
    if (!j["contour"].is_array()) throw ParseError("contour: expected an array of circles");
    CircleSet cs;
    for (std::size_t i = 0; i < j["contour"].size(); ++i) {
      const std::string w = "contour[" + std::to_string(i) + "]";
      const Json& e = require_object(j["contour"][i], w);
      reject_unknown(e, {"center", "radius"}, w);
      if (!e.contains("center") || !e.contains("radius"))
        throw ParseError(w + ": 'center' and 'radius' are required");
      cs.push_back({complex_from_json(e["center"], w + ".center"), positive(e["radius"], w + ".radius")});
    }
    cfg.contour = std::move(cs);
  }
  if (j.contains("max_degree")) {
    const auto d = integer(j["max_degree"], "max_degree");
    if (d < 1 || d > 64) throw ParseError("max_degree: must be between 1 and 64");
    cfg.max_degree = static_cast<int>(d);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ParseError("seed: expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("family")) cfg.family = text(j["family"], "family");
  if (j.contains("size")) {
    const auto n = integer(j["size"], "size");
    if (n < 1) throw ParseError("size: must be positive");
    cfg.size = static_cast<std::size_t>(n);
  }
  if (j.contains("stamp")) {
    const Json& s = require_object(j["stamp"], "stamp");
    for (auto it = s.begin(); it != s.end(); ++it)
      cfg.stamp[it.key()] = number(it.value(), "stamp." + it.key());
  }
  if (j.contains("output")) cfg.output = text(j["output"], "output");
  return cfg;
}

ProblemConfig parse_config_text(const std::string& content) {
  Json j;
  try {
    j = Json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config: malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

ProblemConfig load_config(const std::string& path) { return parse_config_text(read_file(path)); }

Json to_json(const ProblemConfig& cfg) {
  Json j = Json::object();
  if (cfg.family) j["family"] = *cfg.family;
  if (cfg.size) j["size"] = *cfg.size;
  if (cfg.seed) j["seed"] = *cfg.seed;
  if (cfg.method) j["method"] = *cfg.method;
  if (cfg.tol) j["tol"] = *cfg.tol;
  if (cfg.polynomial) {
    Json p = Json::object();
    if (cfg.polynomial->roots) {
      p["roots"] = complex_list_to_json(*cfg.polynomial->roots);
      if (cfg.polynomial->leading != cplx(1.0)) p["leading"] = complex_to_json(cfg.polynomial->leading);
    }
    if (cfg.polynomial->coefficients) p["coefficients"] = complex_list_to_json(*cfg.polynomial->coefficients);
    j["polynomial"] = std::move(p);
  }
  if (cfg.grid) {
    Json g = Json::object();
    if (cfg.grid->lower) g["lower"] = complex_to_json(*cfg.grid->lower);
    if (cfg.grid->upper) g["upper"] = complex_to_json(*cfg.grid->upper);
    if (cfg.grid->resolution) g["resolution"] = *cfg.grid->resolution;
    j["grid"] = std::move(g);
  }
  if (cfg.margin) j["margin"] = *cfg.margin;
  if (!cfg.eps.empty()) j["eps"] = cfg.eps;
  if (cfg.shift) j["shift"] = *cfg.shift;
  if (cfg.order) j["order"] = *cfg.order;
  if (cfg.contour) {
    Json cs = Json::array();
    for (const auto& c : *cfg.contour)
      cs.push_back(Json{{"center", complex_to_json(c.center)}, {"radius", c.radius}});
    j["contour"] = std::move(cs);
  }
  if (cfg.max_degree) j["max_degree"] = *cfg.max_degree;
  if (!cfg.stamp.empty()) {
    Json s = Json::object();
    for (const auto& [k, v] : cfg.stamp) s[k] = v;
    j["stamp"] = std::move(s);
  }
  if (cfg.output) j["output"] = *cfg.output;
  if (cfg.a) j["A"] = matrix_to_json(*cfg.a);
  if (cfg.b) j["B"] = matrix_to_json(*cfg.b);
  if (cfg.c) j["C"] = matrix_to_json(*cfg.c);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace polysep

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polysep/matcore.hpp"
#include "polysep/multicentric.hpp"
#include "polysep/polyops.hpp"
#include "polysep/regions.hpp"

namespace polysep {

using Json = nlohmann::ordered_json;

/// Either roots or ascending coefficients, never both.
struct PolySpec {
  std::optional<std::vector<cplx>> roots;
  std::optional<std::vector<cplx>> coefficients;
  cplx leading = 1.0;

  Poly to_poly() const;
  bool operator==(const PolySpec&) const = default;
};

struct GridConfig {
  std::optional<cplx> lower;
  std::optional<cplx> upper;
  std::optional<std::size_t> resolution;

  bool operator==(const GridConfig&) const = default;
};

/**
 * Problem description shared by every subcommand.
 *
 * On disk: a JSON object. Matrices are arrays of rows, every entry a
 * two-element [re, im] array. Unknown keys are rejected.
 */
struct ProblemConfig {
  std::optional<CMatrix> a;
  std::optional<CMatrix> b;
  std::optional<CMatrix> c;
  std::optional<std::string> method;
  std::optional<PolySpec> polynomial;
  std::optional<double> tol;
  std::optional<GridConfig> grid;
  std::optional<double> margin;
  std::vector<double> eps;
  std::optional<double> shift;
  std::optional<int> order;
  std::optional<CircleSet> contour;
  std::optional<int> max_degree;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> family;
  std::optional<std::size_t> size;
  std::map<std::string, double> stamp;
  std::optional<std::string> output;

  bool operator==(const ProblemConfig& o) const;
};

/// Throws ParseError with the offending key path.
ProblemConfig parse_config(const Json& j);
ProblemConfig parse_config_text(const std::string& text);
ProblemConfig load_config(const std::string& path);

Json to_json(const ProblemConfig& cfg);
/// Two-space indented, trailing newline.
std::string dump(const Json& j);

Json complex_to_json(cplx z);
Json matrix_to_json(const CMatrix& m);
Json complex_list_to_json(const std::vector<cplx>& v);
cplx complex_from_json(const Json& j, const std::string& where);
CMatrix matrix_from_json(const Json& j, const std::string& where);

std::string read_file(const std::string& path);
/// Throws Error on I/O failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace polysep

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polysep/matcore.hpp"
#include "polysep/multicentric.hpp"
#include "polysep/multicentric_exact.hpp"
#include "polysep/polyops.hpp"
#include "polysep/regions.hpp"

namespace polysep {

enum class Method { Oracle, Rosenblum, DiscSeries, Heinz, SignNewton, Multicentric, SignSeriesM2 };

std::string to_string(Method m);
/// Accepts the CLI names (oracle, rosenblum, disc-series, ...). Throws InvalidArgument.
Method method_from_string(const std::string& name);
const std::vector<Method>& all_methods();

struct SolveLimits {
  int max_iterations = 100;          ///< sign-newton
  std::size_t max_nodes = 1u << 16;  ///< rosenblum, per circle
  int max_terms = 200000;            ///< series methods
  int max_panels = 1 << 16;          ///< heinz
  int max_margin_halvings = 6;       ///< multicentric contour retries
};

/// AX - XB = C with A m x m, B n x n, C m x n.
struct SylvesterProblem {
  CMatrix a;
  CMatrix b;
  CMatrix c;
  Method method = Method::Oracle;
  std::optional<Poly> p;
  double tol = 1e-10;
  SolveLimits limits;
  /// Real shift subtracted from A and B by heinz and sign-newton (midpoint when unset).
  std::optional<double> shift;
  /// Level-set margin t for multicentric (0.05 |p(M)| when unset).
  std::optional<double> margin;
  std::optional<GridBox> box;
  std::size_t resolution = kDefaultResolution;
  /// Rosenblum contour; built from the spectra when unset.
  std::optional<CircleSet> contour;
  /// Fixed truncation order for the disc series (certificate driven).
  std::optional<int> order;

  /// Throws DimensionError / InvalidArgument.
  void validate() const;
};

struct SolveReport {
  CMatrix x;
  double residual = 0.0;
  Method method = Method::Oracle;
  /// Truncation order or node count; -1 when not applicable.
  int order = -1;
  int iterations = 0;
  std::optional<double> bound;
  std::string certificate;
  std::map<std::string, double> diagnostics;
};

/// |AX - XB - C|_F / |C|_F, or the absolute residual when C = 0.
double relative_residual(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& x);

/// Smallest |lambda - mu| over lambda in sigma(A), mu in sigma(B).
double spectral_gap(const CMatrix& a, const CMatrix& b);

SolveReport solve(const SylvesterProblem& prob);

SolveReport solve_oracle(const SylvesterProblem& prob);
SolveReport solve_rosenblum(const SylvesterProblem& prob);
SolveReport solve_disc_series(const SylvesterProblem& prob);
SolveReport solve_heinz(const SylvesterProblem& prob);
SolveReport solve_sign_newton(const SylvesterProblem& prob);
SolveReport solve_multicentric(const SylvesterProblem& prob);
SolveReport solve_sign_series_m2(const SylvesterProblem& prob);

/// Exact coefficients of (1 + w)^{-1/2} = sum_k beta_k w^k, k < count.
std::vector<Rational> inverse_sqrt_coefficients(int count);

/// Disjoint circles around clusters of sigma(A) that exclude sigma(B).
/// Throws CertificateError when no such circle set is found.
CircleSet rosenblum_contour(const CMatrix& a, const CMatrix& b);

/// Truncated disc series Y_N = -sum_{n<=N} R^n C S^{-n-1}.
CMatrix disc_series_partial(const CMatrix& r, const CMatrix& s_inv, const CMatrix& c, int order);

/// Certified truncation for the disc series under V_p(A) disjoint from Sigma_eps(B).
struct DiscBound {
  double eps = 0.0;
  double norm_pa = 0.0;
  double delta = 0.0;      ///< min |p| on the contour minus |p(A)|
  double length = 0.0;     ///< total contour length
  double r = 0.0;          ///< |p(A)| / (|p(A)| + delta)
  double inverse_bound = 0.0;  ///< bound on |S(p(A), p(B))^{-1}|
  double norm_q = 0.0;     ///< coefficient bound on |q(A,B)|
  double tol = 0.0;
  int order = 0;
  CircleSet contour;

  /// Bound on |X - q(A,B)(Y_N)|_2 for right-hand side norm norm_c (2-norm).
  double error_bound(int n, double norm_c) const;
};

DiscBound truncation_bound_disc(const Poly& p, const CMatrix& a, const CMatrix& b, double eps,
                                double tol, std::optional<GridBox> box = std::nullopt,
                                std::size_t resolution = kDefaultResolution);

}  // namespace polysep

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "polysep/matcore.hpp"

namespace polysep {

/// Default relative tolerance for root residuals, |p(root)| <= tol_root*(1+max|coeff|).
inline constexpr double kTolRoot = 1e-8;

/// Minimum pairwise root distance accepted as "simple": 1e-6*(1+max|root|).
double simple_root_tolerance(std::span<const cplx> roots);

/**
 * Scalar complex polynomial, coefficients in ascending degree.
 *
 * Trailing zero coefficients are trimmed, so the leading coefficient is
 * nonzero; the zero polynomial has no coefficients and degree -1. A
 * polynomial built from roots remembers them.
 */
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<cplx> ascending);

  static Poly constant(cplx c);
  static Poly monomial(int k, cplx c = 1.0);
  /// leading * prod (z - r_i)
  static Poly from_roots(std::span<const cplx> roots, cplx leading = 1.0);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == cplx(1.0); }
  cplx leading() const noexcept { return coeffs_.empty() ? cplx{} : coeffs_.back(); }
  cplx coeff(int k) const noexcept;
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  const std::optional<std::vector<cplx>>& known_roots() const noexcept { return roots_; }

  cplx operator()(cplx z) const;
  /// Horner evaluation at a square matrix.
  CMatrix operator()(const CMatrix& t) const;

  Poly derivative(int k = 1) const;
  Poly monic() const;
  /// this(inner(z))
  Poly compose(const Poly& inner) const;
  /// Taylor coefficients at z0: this(z0 + h) = sum_k out[k] h^k.
  std::vector<cplx> taylor_at(cplx z0) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(cplx s, const Poly& a);

 private:
  std::vector<cplx> coeffs_;
  std::optional<std::vector<cplx>> roots_;
};

/// Roots via companion-matrix eigenvalues, polished by two Newton steps.
/// Returns the stored roots when the polynomial was built from roots.
std::vector<cplx> roots(const Poly& p);

/// Symmetric Hausdorff distance between two finite point sets.
double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b);

/// Lagrange basis delta_j at distinct nodes.
struct LagrangeBasis {
  std::vector<cplx> roots;
  std::vector<Poly> basis;
};

/// Throws ConditioningError naming the closest pair when two roots are
/// closer than simple_root_tolerance.
LagrangeBasis lagrange_basis(std::span<const cplx> roots);

/// Greedy Leja ordering: the first point has the largest modulus, each
/// further point maximizes the product of distances to those already chosen.
std::vector<cplx> leja_points(std::span<const cplx> candidates, std::size_t count);

}  // namespace polysep

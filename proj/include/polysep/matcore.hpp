#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polysep/errors.hpp"

namespace polysep {

using cplx = std::complex<double>;
using EMatrix = Eigen::MatrixXcd;

/// Default tolerances of the dense kernel. tol_eig is per unit dimension.
struct Tolerances {
  double eig_per_dim = 1e-8;
  double lin = 1e-10;
  double norm = 1e-10;
};

/**
 * Dense complex matrix with value semantics.
 *
 * Storage is an Eigen matrix; the public surface exposes row-major entries.
 * Entries supplied by callers are checked to be finite on construction.
 * Arithmetic checks shapes and throws DimensionError on mismatch.
 */
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::span<const cplx> row_major);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
  static CMatrix diagonal(std::span<const cplx> diag);
  /// Wraps an Eigen matrix; throws if any entry is non-finite.
  static CMatrix from_eigen(EMatrix m);
  /// [[tl, tr], [bl, br]] with shape checks.
  static CMatrix blocks(const CMatrix& tl, const CMatrix& tr, const CMatrix& bl,
                        const CMatrix& br);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }
  bool is_square() const noexcept { return m_.rows() == m_.cols(); }
  bool empty() const noexcept { return m_.size() == 0; }

  cplx operator()(std::size_t i, std::size_t j) const;
  std::vector<cplx> row_major() const;
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  const EMatrix& eigen() const noexcept { return m_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  double frobenius_norm() const;
  double max_abs() const;
  cplx trace() const;
  bool all_finite() const;

  CMatrix operator-() const;
  friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(cplx s, const CMatrix& a);
  friend CMatrix operator*(const CMatrix& a, cplx s);
  friend CMatrix operator/(const CMatrix& a, cplx s);

  /// a - s*I
  CMatrix shifted(cplx s) const;

 private:
  struct Unchecked {};
  CMatrix(EMatrix m, Unchecked) : m_(std::move(m)) {}
  EMatrix m_;
};

/// Eigenvalues with multiplicity, tagged with where they came from.
struct Spectrum {
  std::vector<cplx> values;
  std::string source;

  double radius() const;
  double min_real() const;
  double max_real() const;
};

/// Solves a*x = rhs by LU with partial pivoting.
/// Throws SingularityError when the reciprocal condition estimate is below
/// machine precision or the residual exceeds tol.lin * |a| * |x|.
CMatrix solve_linear(const CMatrix& a, const CMatrix& rhs, const Tolerances& tol = {});
CMatrix inverse(const CMatrix& a, const Tolerances& tol = {});
/// Reciprocal 1-norm condition estimate from the LU factorization.
double rcond_estimate(const CMatrix& a);

/// Schur-based eigenvalues. Throws NumericalError if QR iteration stalls.
Spectrum eigenvalues(const CMatrix& t, std::string source = {});
/// max over lambda of sigma_min(lambda I - t), the quantity bounded by tol_eig*|t|.
double spectrum_residual(const CMatrix& t, const Spectrum& s);

/// Induced 2-norm.
double op_norm(const CMatrix& t);
/// 1/|t^{-1}|_2 for invertible t, 0 for singular t.
double smallest_singular_value(const CMatrix& t);
std::vector<double> singular_values(const CMatrix& t);

/// Matrix exponential by scaling and squaring with a diagonal Pade approximant.
/// Throws RangeError if the result overflows.
CMatrix expm(const CMatrix& t);

/// Kronecker product.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Frobenius distance relative to |ref|_F (absolute when ref is zero).
double relative_difference(const CMatrix& x, const CMatrix& ref);

}  // namespace polysep

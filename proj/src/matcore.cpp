#include "polysep/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace polysep {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw DimensionError(os.str());
  }
}

void require_square(const CMatrix& a, const char* op) {
  if (!a.is_square()) {
    std::ostringstream os;
    os << op << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw DimensionError(os.str());
  }
}

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : m_(EMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols))) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::span<const cplx> row_major)
    : CMatrix(rows, cols) {
  if (row_major.size() != rows * cols) {
    throw DimensionError("CMatrix: entry count " + std::to_string(row_major.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const cplx z = row_major[i * cols + j];
      if (!finite(z)) throw InvalidArgument("CMatrix: non-finite entry");
      m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = z;
    }
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<cplx> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("CMatrix: ragged initializer");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  *this = CMatrix(r, c, entries);
}

CMatrix CMatrix::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return CMatrix(EMatrix::Identity(k, k), Unchecked{});
}

CMatrix CMatrix::diagonal(std::span<const cplx> diag) {
  CMatrix d(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (!finite(diag[i])) throw InvalidArgument("CMatrix::diagonal: non-finite entry");
    d.m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
  }
  return d;
}

CMatrix CMatrix::from_eigen(EMatrix m) {
  if (!m.allFinite()) throw NumericalError("CMatrix::from_eigen: non-finite entry");
  return CMatrix(std::move(m), Unchecked{});
}

CMatrix CMatrix::blocks(const CMatrix& tl, const CMatrix& tr, const CMatrix& bl,
                        const CMatrix& br) {
  if (tl.rows() != tr.rows() || bl.rows() != br.rows() || tl.cols() != bl.cols() ||
      tr.cols() != br.cols()) {
    throw DimensionError("CMatrix::blocks: inconsistent block shapes");
  }
  EMatrix m(tl.m_.rows() + bl.m_.rows(), tl.m_.cols() + tr.m_.cols());
  m << tl.m_, tr.m_, bl.m_, br.m_;
  return CMatrix(std::move(m), Unchecked{});
}

cplx CMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i >= rows() || j >= cols()) throw DimensionError("CMatrix: index out of range");
  return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

std::vector<cplx> CMatrix::row_major() const {
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(m_.size()));
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < m_.cols(); ++j) out.push_back(m_(i, j));
  return out;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows() || c0 + nc > cols()) throw DimensionError("CMatrix::block: out of range");
  return CMatrix(m_.block(static_cast<Eigen::Index>(r0), static_cast<Eigen::Index>(c0),
                          static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc)),
                 Unchecked{});
}

CMatrix CMatrix::adjoint() const { return CMatrix(m_.adjoint(), Unchecked{}); }
CMatrix CMatrix::transpose() const { return CMatrix(m_.transpose(), Unchecked{}); }
double CMatrix::frobenius_norm() const { return m_.norm(); }
double CMatrix::max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

cplx CMatrix::trace() const {
  require_square(*this, "trace");
  return m_.trace();
}

bool CMatrix::all_finite() const { return m_.allFinite(); }

CMatrix CMatrix::operator-() const { return CMatrix(-m_, Unchecked{}); }

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "add");
  return CMatrix(a.m_ + b.m_, CMatrix::Unchecked{});
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "sub");
  return CMatrix(a.m_ - b.m_, CMatrix::Unchecked{});
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream os;
    os << "mul: inner dimensions differ (" << a.rows() << "x" << a.cols() << " * " << b.rows()
       << "x" << b.cols() << ")";
    throw DimensionError(os.str());
  }
  return CMatrix(a.m_ * b.m_, CMatrix::Unchecked{});
}

CMatrix operator*(cplx s, const CMatrix& a) { return CMatrix(s * a.m_, CMatrix::Unchecked{}); }
CMatrix operator*(const CMatrix& a, cplx s) { return CMatrix(a.m_ * s, CMatrix::Unchecked{}); }
CMatrix operator/(const CMatrix& a, cplx s) { return CMatrix(a.m_ / s, CMatrix::Unchecked{}); }

CMatrix CMatrix::shifted(cplx s) const {
  require_square(*this, "shifted");
  EMatrix m = m_;
  m.diagonal().array() -= s;
  return CMatrix(std::move(m), Unchecked{});
}

double Spectrum::radius() const {
  double r = 0.0;
  for (const auto& z : values) r = std::max(r, std::abs(z));
  return r;
}

double Spectrum::min_real() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& z : values) r = std::min(r, z.real());
  return r;
}

double Spectrum::max_real() const {
  double r = -std::numeric_limits<double>::infinity();
  for (const auto& z : values) r = std::max(r, z.real());
  return r;
}

double rcond_estimate(const CMatrix& a) {
  require_square(a, "rcond_estimate");
  if (a.empty()) return 1.0;
  Eigen::PartialPivLU<EMatrix> lu(a.eigen());
  return lu.rcond();
}

CMatrix solve_linear(const CMatrix& a, const CMatrix& rhs, const Tolerances& tol) {
  require_square(a, "solve_linear");
  if (a.rows() != rhs.rows()) throw DimensionError("solve_linear: rhs row count mismatch");
  if (a.empty()) return rhs;
  Eigen::PartialPivLU<EMatrix> lu(a.eigen());
  const double rc = lu.rcond();
  const double eps = std::numeric_limits<double>::epsilon();
  if (!(rc > eps)) {
    throw SingularityError("solve_linear: matrix is singular to working precision",
                           rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity());
  }
  EMatrix x = lu.solve(rhs.eigen());
  if (!x.allFinite()) throw SingularityError("solve_linear: non-finite solution", 1.0 / rc);
  const double res = (a.eigen() * x - rhs.eigen()).norm();
  const double scale = a.eigen().norm() * x.norm();
  if (res > tol.lin * scale && res > tol.lin * rhs.eigen().norm()) {
    throw SingularityError("solve_linear: residual above tolerance (ill-conditioned)", 1.0 / rc);
  }
  return CMatrix::from_eigen(std::move(x));
}

CMatrix inverse(const CMatrix& a, const Tolerances& tol) {
  return solve_linear(a, CMatrix::identity(a.rows()), tol);
}

Spectrum eigenvalues(const CMatrix& t, std::string source) {
  require_square(t, "eigenvalues");
  Spectrum s;
  s.source = std::move(source);
  if (t.empty()) return s;
  Eigen::ComplexEigenSolver<EMatrix> solver;
  solver.setMaxIterations(60);
  solver.compute(t.eigen(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalues: Schur iteration did not converge",
                         60 * static_cast<int>(t.rows()));
  }
  const auto& ev = solver.eigenvalues();
  s.values.assign(ev.data(), ev.data() + ev.size());
  return s;
}

double spectrum_residual(const CMatrix& t, const Spectrum& s) {
  double worst = 0.0;
  for (const auto& lambda : s.values) {
    worst = std::max(worst, smallest_singular_value(t.shifted(lambda)));
  }
  return worst;
}

std::vector<double> singular_values(const CMatrix& t) {
  if (t.empty()) return {};
  Eigen::JacobiSVD<EMatrix> svd(t.eigen());
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

double op_norm(const CMatrix& t) {
  if (t.empty()) return 0.0;
  return singular_values(t).front();
}

double smallest_singular_value(const CMatrix& t) {
  require_square(t, "smallest_singular_value");
  if (t.empty()) return 0.0;
  return singular_values(t).back();
}

CMatrix expm(const CMatrix& t) {
  require_square(t, "expm");
  if (t.empty()) return t;
  EMatrix e = t.eigen().exp();
  if (!e.allFinite()) throw RangeError("expm: result overflows double precision");
  return CMatrix::from_eigen(std::move(e));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const auto ar = a.eigen().rows(), ac = a.eigen().cols();
  const auto br = b.eigen().rows(), bc = b.eigen().cols();
  EMatrix k(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j) k.block(i * br, j * bc, br, bc) = a.eigen()(i, j) * b.eigen();
  return CMatrix::from_eigen(std::move(k));
}

double relative_difference(const CMatrix& x, const CMatrix& ref) {
  const double d = (x - ref).frobenius_norm();
  const double r = ref.frobenius_norm();
  return r > 0 ? d / r : d;
}

}  // namespace polysep

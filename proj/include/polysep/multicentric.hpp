#pragma once

#include <span>
#include <string>
#include <vector>

#include "polysep/matcore.hpp"
#include "polysep/polyops.hpp"

namespace polysep {

/// Polynomials b_{n,m} with (f o p)^{(n)} = sum_m b_{n,m} f^{(m)}(p), 0 <= m <= n <= N.
class BnmTable {
 public:
  static BnmTable build(const Poly& p, int order);

  int order() const noexcept { return order_; }
  const Poly& source() const noexcept { return p_; }
  /// Zero polynomial for m > n or m < 0.
  const Poly& at(int n, int m) const;

 private:
  Poly p_;
  int order_ = 0;
  std::vector<std::vector<Poly>> b_;
  Poly zero_;
};

BnmTable bnm_table(const Poly& p, int order);

/// derivatives[j][n] = phi^{(n)}(lambda_j), 0 <= n <= order.
struct PhiGerm {
  std::vector<std::vector<cplx>> derivatives;

  std::size_t roots() const noexcept { return derivatives.size(); }
  int order() const noexcept {
    return derivatives.empty() ? -1 : static_cast<int>(derivatives.front().size()) - 1;
  }
  /// Throws InvalidArgument unless rectangular and finite.
  void validate() const;
};

/// phi = signs[j] near lambda_j.
PhiGerm phi_germ_piecewise_constant(std::span<const int> signs, int order);
/// phi(z) = z + signs[j]*c near lambda_j.
PhiGerm phi_germ_shift(std::span<const cplx> roots, std::span<const int> signs, double c,
                       int order);
/// Germ of an entire polynomial phi at the given roots.
PhiGerm phi_germ_polynomial(const Poly& phi, std::span<const cplx> roots, int order);

enum class Arithmetic {
  Double,    ///< plain complex<double>; fine for short series
  Adaptive,  ///< double, then MPFR at growing precision until two rungs agree
};

struct TaylorOptions {
  Arithmetic arithmetic = Arithmetic::Adaptive;
  /// Expected decay radius; sets the envelope max(1,|alpha_{j,0}|)*radius^{-n}
  /// against which two precision rungs are compared.
  double envelope_radius = 1.0;
  double agreement = 1e-15;
};

/**
 * Branch Taylor coefficients alpha[j][n] = f_j^{(n)}(0)/n! of
 * phi(z) = sum_j delta_j(z) f_j(p(z)).
 *
 * radius and decay are filled in by attach_decay; radius 0 means unknown.
 */
struct MulticentricSeries {
  std::vector<cplx> roots;
  std::vector<std::vector<cplx>> alpha;
  double radius = 0.0;
  std::vector<double> decay;
  /// Decimal digits of the arithmetic that produced alpha (16 for double).
  int digits = 16;

  int order() const noexcept {
    return alpha.empty() ? -1 : static_cast<int>(alpha.front().size()) - 1;
  }
};

/// Throws ConditioningError when |p'(lambda_j)| is below the simple-root tolerance.
MulticentricSeries taylor_coeffs(const Poly& p, const PhiGerm& germ, int order,
                                 const TaylorOptions& opts = {});

struct SeriesValue {
  CMatrix value;
  /// |p(T)|_2 / radius, NaN when the radius is unknown.
  double ratio = 0.0;
  bool divergence_warning = false;
};

/// sum_j delta_j(T) sum_{n<=N} alpha_{j,n} p(T)^n, summed in ascending n then j.
SeriesValue series_eval_matrix(const MulticentricSeries& s, const Poly& p, const CMatrix& t,
                               int order);
/// Scalar version of the same sum.
cplx series_eval_scalar(const MulticentricSeries& s, const Poly& p, cplx z, int order);

struct Circle {
  cplx center;
  double radius = 0.0;
};
using CircleSet = std::vector<Circle>;

/// Trapezoidal nodes on a circle, theta_k = 2 pi k / count.
std::vector<cplx> circle_nodes(const Circle& c, std::size_t count);

/// L_j = (1/2pi) sum over circles of the integral of |dlambda|/|lambda - lambda_j|.
/// Throws CertificateError if |p| <= level at any node.
std::vector<double> decay_constants(const Poly& p, double level, std::span<const cplx> roots,
                                    const CircleSet& contour);

/// Stores radius and L_j on the series.
void attach_decay(MulticentricSeries& s, double radius, std::vector<double> decay);

/// Smallest N >= 0 with r^{N+1} < 2(1-r) tol / prefactor. DivergenceError if r >= 1.
int truncation_order(double r, double prefactor, double tol);
/// prefactor * r^{N+1} / (1 - r)
double truncation_bound(double r, double prefactor, int order);

/// sum_i delta_i(z) P_i(p(z)) with P_i the order-N truncation of f_i.
Poly assemble_poly(const MulticentricSeries& s, const Poly& p, int order);

/// Half-plane mapping polynomial: truncation of phi = z +- c on the two root groups.
/// The result is expanded in monomials, which loses accuracy quickly beyond N of about 30.
Poly build_halfplane_poly(const Poly& p, std::span<const int> signs, double c, int order,
                          const TaylorOptions& opts = {});

/// Truncation order for the half-plane polynomial from the decay of the
/// series on A and on B.
struct HalfplaneOrder {
  double r = 0.0;  ///< |p(A)| / radius
  double s = 0.0;  ///< |p(B)| / radius
  double phi_sup = 0.0;
  double prefactor_a = 0.0;
  double prefactor_b = 0.0;
  int order = 0;
};

/// Chooses N so both |phi(A) - P(A)| and |phi(B) - P(B)| bounds fall below target.
/// Throws DivergenceError when r or s is at least 1.
HalfplaneOrder halfplane_order(const Poly& p, std::span<const int> signs, double c,
                               const CMatrix& a, const CMatrix& b, double radius,
                               const CircleSet& contour, double target = 1.0);

}  // namespace polysep

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polysep/matcore.hpp"
#include "polysep/polyops.hpp"

namespace polysep {

/// coeff * lambda^i * mu^j
struct BivarTerm {
  int i = 0;
  int j = 0;
  cplx coeff{};
};

/**
 * Bivariate polynomial f(lambda, mu).
 *
 * Either a generic term list, or the divided difference
 * (p(lambda) - p(mu)) / (lambda - mu) of a scalar polynomial p, kept in
 * structural form so it is applied through the power-sum recursion
 * without ever expanding the bivariate coefficient grid.
 */
class BivarPoly {
 public:
  static BivarPoly generic(std::vector<BivarTerm> terms);
  static BivarPoly divided_difference_of(Poly p);

  static BivarPoly one() { return generic({{0, 0, 1.0}}); }
  static BivarPoly lambda() { return generic({{1, 0, 1.0}}); }
  static BivarPoly mu() { return generic({{0, 1, 1.0}}); }
  /// S(lambda, mu) = lambda - mu
  static BivarPoly sylvester() { return generic({{1, 0, 1.0}, {0, 1, -1.0}}); }
  /// p(lambda) - p(mu)
  static BivarPoly difference_of(const Poly& p);

  bool is_divided_difference() const noexcept { return source_.has_value(); }
  const Poly& source() const;

  /// Combined, sorted term list (divided-difference form is expanded here).
  std::vector<BivarTerm> terms() const;
  int degree_lambda() const;
  int degree_mu() const;

  cplx operator()(cplx lambda, cplx mu) const;

  friend BivarPoly operator*(const BivarPoly& g, const BivarPoly& f);
  friend BivarPoly operator+(const BivarPoly& g, const BivarPoly& f);

 private:
  std::vector<BivarTerm> terms_;
  std::optional<Poly> source_;
};

/// q(lambda, mu) = sum_{j>=1} a_j q_{j-1}(lambda, mu) for p = sum a_j z^j.
BivarPoly divided_difference(const Poly& p);

/// f(A,B)(C) = sum a_ij A^i C B^j.
/// a is m x m, b is n x n, c is m x n.
CMatrix apply(const BivarPoly& f, const CMatrix& a, const CMatrix& b, const CMatrix& c);

/// |g(A,B)(f(A,B)(C)) - (g f)(A,B)(C)|_F
double composition_check(const BivarPoly& g, const BivarPoly& f, const CMatrix& a,
                         const CMatrix& b, const CMatrix& c);

/// p(M)^k for M = [[A, C], [0, B]] through the block formula
/// [[R^k, q_{k-1}(R,S)(T)], [0, S^k]] with R = p(A), S = p(B), T = q(A,B)(C).
CMatrix block_poly_power(const Poly& p, const CMatrix& a, const CMatrix& b, const CMatrix& c,
                         int k);

/// [[A, C], [0, B]]
CMatrix block_triangular(const CMatrix& a, const CMatrix& b, const CMatrix& c);

/// Successive powers of an upper block-triangular [[R, T], [0, S]] kept in block form.
class BlockPowerLadder {
 public:
  BlockPowerLadder(CMatrix r, CMatrix s, CMatrix t);
  /// Advances to the next power; the ladder starts at the zeroth power (identity).
  void advance();
  int exponent() const noexcept { return k_; }
  const CMatrix& top_left() const noexcept { return rk_; }
  const CMatrix& top_right() const noexcept { return tk_; }
  const CMatrix& bottom_right() const noexcept { return sk_; }
  CMatrix assembled() const;

 private:
  CMatrix r_, s_, t_;
  CMatrix rk_, sk_, tk_;
  int k_ = 0;
};

struct NormEstimate {
  double upper = 0.0;  ///< sum |a_ij| |A|^i |B|^j
  double lower = 0.0;  ///< max over random unit C of |f(A,B)(C)|_2
};

/// Two-sided estimate of the operator norm of C -> f(A,B)(C) (2-norm on C).
NormEstimate op_norm_estimate(const BivarPoly& f, const CMatrix& a, const CMatrix& b,
                              int probes = 8, std::uint64_t seed = 20240611);

/// Coefficient upper bound alone (cheap; used by the truncation rules).
double op_norm_upper(const BivarPoly& f, double norm_a, double norm_b);

}  // namespace polysep

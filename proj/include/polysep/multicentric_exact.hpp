#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "polysep/matcore.hpp"

namespace polysep {

using Rational = boost::multiprecision::mpq_rational;

/// re + i*im with exact rational parts.
struct GaussianRational {
  Rational re;
  Rational im;

  cplx to_cplx() const;
};

/// num/den + i*0
GaussianRational gaussian(long num, long den = 1, long im_num = 0, long im_den = 1);

/**
 * Branch coefficients alpha[j][n] for the piecewise-constant germ
 * phi = signs[j] near roots[j], with p = prod (z - roots_j), computed in
 * exact Gaussian-rational arithmetic.
 */
std::vector<std::vector<GaussianRational>> taylor_coeffs_exact(
    std::span<const GaussianRational> roots, std::span<const int> signs, int order);

/// Same table rounded to double.
std::vector<std::vector<cplx>> to_double(const std::vector<std::vector<GaussianRational>>& t);

}  // namespace polysep

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polysep/config.hpp"

namespace polysep {

/// symmetric-skew, selfadjoint-pair, shifted-random, jordan-nonnormal,
/// normal-disc, agreement.
const std::vector<std::string>& families();

/**
 * Deterministic instance of a family. The spectral contract of the family is
 * checked on the result and recorded in cfg.stamp; a violation throws Error.
 *
 *  symmetric-skew    A real symmetric, sigma(A) in [0.5, 1.5]; B real skew, nonsingular.
 *                    Method disc-series with p = z^2 - 1.25.
 *  selfadjoint-pair  A and iB Hermitian, sigma(A^2) and sigma(-B^2) in [0.7, 1].
 *                    Method multicentric with p = z^4 - 1.
 *  shifted-random    complex Gaussian, min Re sigma(A) = 1, max Re sigma(B) = -1.
 *  jordan-nonnormal  1 + nilpotent and -1 + nilpotent upper triangular.
 *  normal-disc       A normal with eigenvalues on |z| = 0.5, B = 2I.
 *  agreement         A near 0.9 I, sigma(B) near -0.1 +- 0.95i, |C| = 0.05: every
 *                    solver's preconditions hold.
 */
ProblemConfig generate(const std::string& family, std::size_t size, std::uint64_t seed);

}  // namespace polysep

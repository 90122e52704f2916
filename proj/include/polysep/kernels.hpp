#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "polysep/matcore.hpp"
#include "polysep/polyops.hpp"

namespace polysep::kernels {

enum class Exec { Serial, Parallel };

/// Axis-aligned grid of nx * ny cells; values are sampled at cell centers,
/// stored row by row (index iy * nx + ix).
struct GridSpec {
  cplx lower;
  cplx upper;
  std::size_t nx = 0;
  std::size_t ny = 0;

  double dx() const { return (upper.real() - lower.real()) / static_cast<double>(nx); }
  double dy() const { return (upper.imag() - lower.imag()) / static_cast<double>(ny); }
  cplx center(std::size_t ix, std::size_t iy) const {
    return {lower.real() + (static_cast<double>(ix) + 0.5) * dx(),
            lower.imag() + (static_cast<double>(iy) + 0.5) * dy()};
  }
};

/// |p(z)| at every cell center.
std::vector<double> abs_poly_grid(const Poly& p, const GridSpec& g, Exec exec = Exec::Parallel);

/// Lower bound of |p| over the disc of radius r around every cell center, from
/// the Taylor expansion of p at the center.
std::vector<double> abs_poly_floor_grid(const Poly& p, const GridSpec& g, double r,
                                        Exec exec = Exec::Parallel);

/// sigma_min(z I - t) at every cell center.
std::vector<double> sigma_min_grid(const CMatrix& t, const GridSpec& g,
                                   Exec exec = Exec::Parallel);

/// sum_{k < count} term(k), terms evaluated independently and added in index
/// order so the result does not depend on the schedule.
EMatrix ordered_sum(std::size_t count, std::size_t rows, std::size_t cols,
                    const std::function<EMatrix(std::size_t)>& term, Exec exec = Exec::Parallel);

/// sum_k w_k (z_k - A)^{-1} C (z_k - B)^{-1}
EMatrix resolvent_sandwich(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                           std::span<const cplx> nodes, std::span<const cplx> weights,
                           Exec exec = Exec::Parallel);

}  // namespace polysep::kernels

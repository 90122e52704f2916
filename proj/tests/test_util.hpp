#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "polysep/matcore.hpp"
#include "polysep/polyops.hpp"

namespace polysep::testing {

class Rand {
 public:
  explicit Rand(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  cplx complex(double scale = 1.0) { return scale * cplx(uniform(), uniform()); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  CMatrix matrix(std::size_t r, std::size_t c, double scale = 1.0) {
    std::vector<cplx> v(r * c);
    for (auto& z : v) z = complex(scale);
    return CMatrix(r, c, v);
  }
  Poly poly(int degree, double scale = 1.0) {
    std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
    for (auto& z : c) z = complex(scale);
    if (std::abs(c.back()) < 0.1) c.back() = 1.0;
    return Poly(c);
  }
  /// Square matrix with spectrum shifted so min Re >= lo (lo > 0) or max Re <= lo (lo < 0).
  CMatrix shifted(std::size_t n, double lo) {
    CMatrix t = matrix(n, n, 1.0 / std::sqrt(static_cast<double>(n)));
    const auto ev = eigenvalues(t).values;
    double edge = lo > 0 ? 1e300 : -1e300;
    for (const auto& z : ev) edge = lo > 0 ? std::min(edge, z.real()) : std::max(edge, z.real());
    return t.shifted(edge - lo);
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline double rel_err(const CMatrix& x, const CMatrix& ref) {
  const double n = ref.frobenius_norm();
  return (x - ref).frobenius_norm() / (n > 0 ? n : 1.0);
}

inline CMatrix diag(std::initializer_list<cplx> d) {
  std::vector<cplx> v(d);
  return CMatrix::diagonal(v);
}

}  // namespace polysep::testing

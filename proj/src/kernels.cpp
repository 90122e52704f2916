#include "polysep/kernels.hpp"

#include <Eigen/SVD>

namespace polysep::kernels {

namespace {

void check_grid(const GridSpec& g) {
  if (g.nx == 0 || g.ny == 0) throw InvalidArgument("grid: empty resolution");
  if (!(g.upper.real() > g.lower.real()) || !(g.upper.imag() > g.lower.imag()))
    throw InvalidArgument("grid: box corners out of order");
}

double sigma_min_at(const EMatrix& t, cplx z) {
  EMatrix m = -t;
  m.diagonal().array() += z;
  Eigen::JacobiSVD<EMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double abs_poly_floor_at(const Poly& p, cplx c, double r) {
  const std::vector<cplx> t = p.taylor_at(c);
  double drop = 0.0, rk = 1.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    rk *= r;
    drop += std::abs(t[k]) * rk;
  }
  return std::max(0.0, std::abs(t.empty() ? cplx(0.0) : t[0]) - drop);
}

}  // namespace

std::vector<double> abs_poly_floor_grid(const Poly& p, const GridSpec& g, double r, Exec exec) {
  check_grid(g);
  if (!(r >= 0.0)) throw InvalidArgument("abs_poly_floor_grid: radius must be non-negative");
  const std::ptrdiff_t cells = static_cast<std::ptrdiff_t>(g.nx * g.ny);
  std::vector<double> out(static_cast<std::size_t>(cells));
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < cells; ++k) {
      const auto u = static_cast<std::size_t>(k);
      out[u] = abs_poly_floor_at(p, g.center(u % g.nx, u / g.nx), r);
    }
  } else {
    for (std::size_t u = 0; u < out.size(); ++u)
      out[u] = abs_poly_floor_at(p, g.center(u % g.nx, u / g.nx), r);
  }
  return out;
}

std::vector<double> abs_poly_grid(const Poly& p, const GridSpec& g, Exec exec) {
  check_grid(g);
  const std::ptrdiff_t cells = static_cast<std::ptrdiff_t>(g.nx * g.ny);
  std::vector<double> out(static_cast<std::size_t>(cells));
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < cells; ++k) {
      const auto u = static_cast<std::size_t>(k);
      out[u] = std::abs(p(g.center(u % g.nx, u / g.nx)));
    }
  } else {
    for (std::size_t u = 0; u < out.size(); ++u) out[u] = std::abs(p(g.center(u % g.nx, u / g.nx)));
  }
  return out;
}

std::vector<double> sigma_min_grid(const CMatrix& t, const GridSpec& g, Exec exec) {
  check_grid(g);
  if (!t.is_square() || t.empty()) throw DimensionError("sigma_min_grid: square matrix required");
  const EMatrix& te = t.eigen();
  const std::ptrdiff_t cells = static_cast<std::ptrdiff_t>(g.nx * g.ny);
  std::vector<double> out(static_cast<std::size_t>(cells));
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t k = 0; k < cells; ++k) {
      const auto u = static_cast<std::size_t>(k);
      out[u] = sigma_min_at(te, g.center(u % g.nx, u / g.nx));
    }
  } else {
    for (std::size_t u = 0; u < out.size(); ++u)
      out[u] = sigma_min_at(te, g.center(u % g.nx, u / g.nx));
  }
  return out;
}

EMatrix ordered_sum(std::size_t count, std::size_t rows, std::size_t cols,
                    const std::function<EMatrix(std::size_t)>& term, Exec exec) {
  std::vector<EMatrix> terms(count);
  if (exec == Exec::Parallel) {
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < n; ++k) terms[static_cast<std::size_t>(k)] = term(static_cast<std::size_t>(k));
  } else {
    for (std::size_t k = 0; k < count; ++k) terms[k] = term(k);
  }
  EMatrix acc = EMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (const auto& t : terms) acc += t;
  return acc;
}

EMatrix resolvent_sandwich(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                           std::span<const cplx> nodes, std::span<const cplx> weights, Exec exec) {
  if (nodes.size() != weights.size()) throw InvalidArgument("resolvent_sandwich: one weight per node");
  const EMatrix& ae = a.eigen();
  const EMatrix& be = b.eigen();
  const EMatrix& ce = c.eigen();
  return ordered_sum(
      nodes.size(), c.rows(), c.cols(),
      [&](std::size_t k) -> EMatrix {
        EMatrix za = -ae;
        za.diagonal().array() += nodes[k];
        EMatrix zb = -be;
        zb.diagonal().array() += nodes[k];
        const EMatrix left = za.partialPivLu().solve(ce);
        // left * zb^{-1} = (zb^T \ left^T)^T
        const EMatrix x = zb.transpose().partialPivLu().solve(left.transpose()).transpose();
        return weights[k] * x;
      },
      exec);
}

}  // namespace polysep::kernels

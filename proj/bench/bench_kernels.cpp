#include <benchmark/benchmark.h>

#include <random>

#include "polysep/kernels.hpp"

using namespace polysep;
using namespace polysep::kernels;

namespace {

CMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n * n);
  for (auto& z : v) z = cplx(d(eng), d(eng)) / std::sqrt(static_cast<double>(n));
  return CMatrix(n, n, v);
}

Poly random_poly(int deg) {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
  for (auto& z : c) z = cplx(d(eng), d(eng));
  return Poly(c);
}

Exec exec_of(const benchmark::State& s) { return s.range(1) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(1) ? "parallel" : "serial"); }

void BM_AbsPolyGrid(benchmark::State& s) {
  const auto res = static_cast<std::size_t>(s.range(0));
  const GridSpec g{cplx(-2, -2), cplx(2, 2), res, res};
  const Poly p = random_poly(8);
  for (auto _ : s) benchmark::DoNotOptimize(abs_poly_grid(p, g, exec_of(s)));
  label(s);
}

void BM_AbsPolyFloorGrid(benchmark::State& s) {
  const auto res = static_cast<std::size_t>(s.range(0));
  const GridSpec g{cplx(-2, -2), cplx(2, 2), res, res};
  const Poly p = random_poly(8);
  for (auto _ : s) benchmark::DoNotOptimize(abs_poly_floor_grid(p, g, 2.0 / res, exec_of(s)));
  label(s);
}

void BM_SigmaMinGrid(benchmark::State& s) {
  const auto res = static_cast<std::size_t>(s.range(0));
  const GridSpec g{cplx(-2, -2), cplx(2, 2), res, res};
  const CMatrix t = random_matrix(12, 3);
  for (auto _ : s) benchmark::DoNotOptimize(sigma_min_grid(t, g, exec_of(s)));
  label(s);
}

void BM_ResolventSandwich(benchmark::State& s) {
  const auto nodes = static_cast<std::size_t>(s.range(0));
  const CMatrix a = random_matrix(24, 4), c = random_matrix(24, 5);
  const CMatrix b = CMatrix::identity(24) * cplx(4.0) + random_matrix(24, 6);
  std::vector<cplx> z(nodes), w(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    z[k] = std::polar(2.0, 2 * M_PI * static_cast<double>(k) / static_cast<double>(nodes));
    w[k] = z[k] / (cplx(0, 1) * static_cast<double>(nodes));
  }
  for (auto _ : s) benchmark::DoNotOptimize(resolvent_sandwich(a, b, c, z, w, exec_of(s)));
  label(s);
}

}  // namespace

BENCHMARK(BM_AbsPolyGrid)->ArgsProduct({{128, 512}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AbsPolyFloorGrid)->ArgsProduct({{128, 512}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SigmaMinGrid)->ArgsProduct({{64, 128}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResolventSandwich)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

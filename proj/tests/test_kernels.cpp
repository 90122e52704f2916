#include <gtest/gtest.h>

#include <omp.h>

#include "polysep/kernels.hpp"
#include "polysep/regions.hpp"
#include "test_util.hpp"

using namespace polysep;
using namespace polysep::kernels;
using polysep::testing::Rand;

namespace {

const GridSpec kGrid{cplx(-1.5, -1.2), cplx(1.7, 1.3), 61, 47};

class Threads : public ::testing::Environment {
 public:
  void SetUp() override { omp_set_num_threads(4); }
};

const auto* const kEnv = ::testing::AddGlobalTestEnvironment(new Threads);

}  // namespace

TEST(Kernels, AbsPolyBitwise) {
  Rand rng(71);
  const Poly p = rng.poly(7);
  EXPECT_EQ(abs_poly_grid(p, kGrid, Exec::Serial), abs_poly_grid(p, kGrid, Exec::Parallel));
}

TEST(Kernels, AbsPolyFloorBitwise) {
  Rand rng(73);
  const Poly p = rng.poly(6);
  EXPECT_EQ(abs_poly_floor_grid(p, kGrid, 0.01, Exec::Serial),
            abs_poly_floor_grid(p, kGrid, 0.01, Exec::Parallel));
}

TEST(Kernels, AbsPolyFloorAtZeroRadiusIsValue) {
  Rand rng(74);
  const Poly p = rng.poly(4);
  const auto v = abs_poly_grid(p, kGrid, Exec::Serial);
  const auto f = abs_poly_floor_grid(p, kGrid, 0.0, Exec::Serial);
  for (std::size_t k = 0; k < v.size(); ++k) EXPECT_NEAR(f[k], v[k], 1e-12 * (1 + v[k]));
}

TEST(Kernels, SigmaMinBitwise) {
  Rand rng(72);
  const CMatrix t = rng.matrix(5, 5);
  EXPECT_EQ(sigma_min_grid(t, kGrid, Exec::Serial), sigma_min_grid(t, kGrid, Exec::Parallel));
}

TEST(Kernels, SigmaMinMatchesDense) {
  Rand rng(73);
  const CMatrix t = rng.matrix(3, 3);
  const auto v = sigma_min_grid(t, kGrid, Exec::Serial);
  for (std::size_t k : {0u, 100u, 2000u}) {
    const cplx z = kGrid.center(k % kGrid.nx, k / kGrid.nx);
    EXPECT_NEAR(v[k], smallest_singular_value(t.shifted(z)), 1e-12);
  }
}

TEST(Kernels, OrderedSumBitwise) {
  Rand rng(74);
  std::vector<EMatrix> terms;
  for (int k = 0; k < 37; ++k) terms.push_back(rng.matrix(4, 3).eigen());
  auto term = [&](std::size_t k) { return terms[k]; };
  const EMatrix s = ordered_sum(terms.size(), 4, 3, term, Exec::Serial);
  const EMatrix p = ordered_sum(terms.size(), 4, 3, term, Exec::Parallel);
  EXPECT_TRUE(s == p);
  EMatrix ref = EMatrix::Zero(4, 3);
  for (const auto& t : terms) ref += t;
  EXPECT_TRUE(s == ref);
}

TEST(Kernels, ResolventSandwichBitwise) {
  Rand rng(75);
  const CMatrix a = rng.matrix(4, 4, 0.3), b = rng.matrix(3, 3, 0.3).shifted(3.0),
                c = rng.matrix(4, 3);
  std::vector<cplx> nodes, weights;
  for (int k = 0; k < 64; ++k) {
    nodes.push_back(std::polar(1.0, 2 * M_PI * k / 64));
    weights.push_back(nodes.back() / 64.0);
  }
  const EMatrix s = resolvent_sandwich(a, b, c, nodes, weights, Exec::Serial);
  const EMatrix p = resolvent_sandwich(a, b, c, nodes, weights, Exec::Parallel);
  EXPECT_TRUE(s == p);
}

TEST(Kernels, GridRegionsIdentical) {
  Rand rng(76);
  const GridBox box{cplx(-2, -2), cplx(2, 2)};
  const CMatrix t = rng.matrix(4, 4);
  const GridRegion s = pseudospectrum_grid(t, 0.1, box, 64, Exec::Serial);
  const GridRegion p = pseudospectrum_grid(t, 0.1, box, 64, Exec::Parallel);
  EXPECT_EQ(s.values, p.values);
  EXPECT_EQ(s.labels, p.labels);
  const Poly q = rng.poly(5);
  EXPECT_EQ(vp_grid(q, 1.0, box, 64, Exec::Serial).labels,
            vp_grid(q, 1.0, box, 64, Exec::Parallel).labels);
}

TEST(Kernels, RejectsEmptyGrid) {
  EXPECT_THROW(abs_poly_grid(Poly::monomial(1), GridSpec{0.0, 1.0, 0, 4}), InvalidArgument);
}

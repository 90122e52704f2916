#include <gtest/gtest.h>

#include "polysep/regions.hpp"
#include "test_util.hpp"

using namespace polysep;
using polysep::testing::diag;
using polysep::testing::Rand;

namespace {

const GridBox kBox{cplx(-2, -2), cplx(2, 2)};

bool subset(const GridRegion& a, const GridRegion& b) {
  for (std::size_t k = 0; k < a.mask.size(); ++k)
    if (a.mask[k] && !b.mask[k]) return false;
  return true;
}

std::size_t count(const GridRegion& g) {
  std::size_t n = 0;
  for (auto m : g.mask) n += m;
  return n;
}

}  // namespace

TEST(Vp, UnitDisc) {
  const CMatrix t = diag({1.0, -1.0});
  const Poly p = Poly::monomial(2);
  const double level = op_norm(p(t));
  EXPECT_NEAR(level, 1.0, 1e-15);
  const GridRegion g = vp_grid(p, level, kBox, 128);
  EXPECT_EQ(g.components, 1);
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double d = std::abs(g.center(ix, iy));
      if (d <= 1.0) EXPECT_TRUE(g.mask[iy * g.nx + ix]);
      if (d > 1.0 + g.cell_diagonal()) EXPECT_FALSE(g.mask[iy * g.nx + ix]);
    }
}

TEST(Vp, FloorBoundsCellFromBelow) {
  Rand rng(50);
  const Poly p = rng.poly(5);
  const GridRegion g = vp_grid(p, 1.0, kBox, 32);
  const double h = 0.5 * g.spec().dx();
  for (std::size_t k = 0; k < g.floor.size(); ++k) {
    EXPECT_LE(g.floor[k], g.values[k]);
    const cplx c = g.center(k % g.nx, k / g.nx);
    for (int s = 0; s < 8; ++s) {
      const cplx z = c + cplx(rng.uniform(-h, h), rng.uniform(-h, h));
      EXPECT_LE(g.floor[k], std::abs(p(z)) * (1 + 1e-12) + 1e-14);
    }
  }
}

TEST(Vp, LemniscateSplitsAtSmallLevel) {
  const std::vector<cplx> r{1.0, -1.0};
  const GridRegion g = vp_grid(Poly::from_roots(r), 0.1, kBox, 256);
  EXPECT_EQ(g.components, 2);
  EXPECT_NE(g.component_of(1.0), g.component_of(-1.0));
  EXPECT_GE(g.component_of(1.0), 0);
  EXPECT_EQ(g.component_of(0.0), -1);
}

TEST(Vp, HugeLevelFillsGrid) {
  const GridRegion g = vp_grid(Poly::monomial(3), 1e6, kBox, 32);
  EXPECT_EQ(g.components, 1);
  EXPECT_EQ(count(g), g.nx * g.ny);
}

TEST(Vp, MaskAndLabelsInvariant) {
  Rand rng(51);
  const GridRegion g = vp_grid(rng.poly(4), 0.8, kBox, 64);
  for (std::size_t k = 0; k < g.mask.size(); ++k) {
    EXPECT_EQ(g.mask[k] != 0, g.floor[k] <= g.level);
    EXPECT_EQ(g.labels[k] >= 0, g.mask[k] != 0);
  }
  // 4-neighbours in the mask share a label.
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix + 1 < g.nx; ++ix) {
      const std::size_t k = iy * g.nx + ix;
      if (g.mask[k] && g.mask[k + 1]) EXPECT_EQ(g.labels[k], g.labels[k + 1]);
    }
}

TEST(Vp, SpectralInclusionRandom) {
  Rand rng(52);
  for (int it = 0; it < 50; ++it) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 6));
    const CMatrix t = rng.matrix(n, n, 0.6);
    const Poly p = rng.poly(rng.integer(1, 4));
    const GridRegion g = vp_grid(p, op_norm(p(t)), default_box(t, t), 128);
    for (auto z : eigenvalues(t).values) EXPECT_GE(g.component_of(z), 0) << it;
  }
}

TEST(Vp, LevelMonotone) {
  Rand rng(53);
  const GridRegion lo = vp_grid(rng.poly(3), 0.3, kBox, 64);
  for (double lv : {0.5, 1.0, 2.0}) EXPECT_TRUE(subset(lo, with_level(lo, lv)));
}

TEST(Pseudospectrum, NormalPoint) {
  const GridRegion g = pseudospectrum_grid(diag({0.0}), 0.5, kBox, 128);
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double d = std::abs(g.center(ix, iy));
      if (d < 0.5 - g.cell_diagonal()) EXPECT_TRUE(g.mask[iy * g.nx + ix]);
      if (d > 0.5 + g.cell_diagonal()) EXPECT_FALSE(g.mask[iy * g.nx + ix]);
    }
}

TEST(Pseudospectrum, ShrinksToEigenvalueCells) {
  const GridRegion g = pseudospectrum_grid(diag({0.01, cplx(-1.0, 0.5)}), 1e-6, kBox, 200);
  // Each eigenvalue touches at most the four cells around a corner.
  EXPECT_GE(count(g), 2u);
  EXPECT_LE(count(g), 8u);
  EXPECT_GE(g.component_of(0.01), 0);
  EXPECT_GE(g.component_of(cplx(-1.0, 0.5)), 0);
}

TEST(Pseudospectrum, JordanLargerThanDiscs) {
  const CMatrix j{{0.0, 1.0}, {0.0, 0.0}};
  EXPECT_LT(smallest_singular_value(j.shifted(0.2)), 0.1);
  const GridRegion g = pseudospectrum_grid(j, 0.1, kBox, 256);
  EXPECT_TRUE(g.contains(0.2));
  EXPECT_GE(g.component_of(0.2), 0);
}

TEST(Pseudospectrum, Nesting) {
  Rand rng(54);
  const CMatrix t = rng.matrix(4, 4, 0.5);
  const GridRegion a = pseudospectrum_grid(t, 0.05, kBox, 64);
  const GridRegion b = pseudospectrum_grid(t, 0.1, kBox, 64);
  const GridRegion c = pseudospectrum_grid(t, 0.3, kBox, 64);
  EXPECT_TRUE(subset(a, b));
  EXPECT_TRUE(subset(b, c));
}

TEST(Certificate, IdentityPolyInconclusiveOrNotSeparated) {
  SeparationOptions o;
  o.margin = 0.0;
  const auto c = separation_certificate(Poly::monomial(1), diag({1.0}), diag({-1.0}),
                                        CMatrix::zeros(1, 1), o);
  EXPECT_NE(c.status, SeparationStatus::Separated);
}

TEST(Certificate, DiagonalPairSquares) {
  const CMatrix a = diag({2.0, 3.0}), b = diag({-2.0, -3.0}), c = CMatrix::zeros(2, 2);
  SeparationOptions o;
  o.margin = 0.5;
  const auto bad = separation_certificate(Poly::monomial(2), a, b, c, o);
  EXPECT_EQ(bad.status, SeparationStatus::NotSeparated);
  EXPECT_LE(bad.score, 0.0);
  // |z^2 - 6.5| on the segment [-3, 3] is 6.5 at 0, well above 2.5 + t.
  EXPECT_GT(std::abs(Poly(std::vector<cplx>{-6.5, 0.0, 1.0})(0.0)), 3.0);
  const auto good = separation_certificate(Poly(std::vector<cplx>{-6.5, 0.0, 1.0}), a, b, c, o);
  EXPECT_EQ(good.status, SeparationStatus::Separated);
  EXPECT_GT(good.score, 0.0);
  EXPECT_NEAR(good.norm, 2.5, 1e-12);
  EXPECT_NE(good.component_a[0], good.component_b[0]);
  EXPECT_EQ(good.component_a[0], good.component_a[1]);
}

TEST(Certificate, LargeCouplingMerges) {
  const CMatrix a = diag({2.0, 3.0}), b = diag({-2.0, -3.0});
  const Poly p(std::vector<cplx>{-6.5, 0.0, 1.0});
  SeparationOptions o;
  o.margin = 0.5;
  // q(A,B)(C) = AC + CB vanishes for diagonal C here, so couple off the diagonal.
  const auto big = separation_certificate(p, a, b, CMatrix{{0.0, 20.0}, {20.0, 0.0}}, o);
  EXPECT_EQ(big.status, SeparationStatus::NotSeparated);
}

TEST(Certificate, RootSigns) {
  const CMatrix a = diag({2.0, 3.0}), b = diag({-2.0, -3.0});
  const std::vector<cplx> r{std::sqrt(6.5), -std::sqrt(6.5)};
  SeparationOptions o;
  o.margin = 0.5;
  const auto c = separation_certificate(Poly::from_roots(r), a, b, CMatrix::zeros(2, 2), o);
  ASSERT_EQ(c.status, SeparationStatus::Separated);
  EXPECT_EQ(root_signs(c), (std::vector<int>{1, -1}));
  const auto circles = level_set_contour(c);
  EXPECT_GE(circles.size(), 2u);
}

TEST(Certificate, StableUnderResolutionDoubling) {
  const CMatrix a = diag({2.0, 3.0}), b = diag({-2.0, -3.0});
  SeparationOptions o;
  o.margin = 0.5;
  o.resolution = 256;
  const Poly p(std::vector<cplx>{-6.5, 0.0, 1.0});
  ASSERT_EQ(separation_certificate(p, a, b, CMatrix::zeros(2, 2), o).status,
            SeparationStatus::Separated);
  o.resolution = 512;
  EXPECT_EQ(separation_certificate(p, a, b, CMatrix::zeros(2, 2), o).status,
            SeparationStatus::Separated);
}

TEST(Eta, DiscClosedForm) {
  std::vector<cplx> d;
  for (int k = 0; k < 6; ++k) d.push_back(std::polar(0.5, 2 * M_PI * k / 6 + 0.3));
  const CMatrix a = CMatrix::diagonal(d), b = 2.0 * CMatrix::identity(2);
  for (int deg = 1; deg <= 8; ++deg) {
    const Poly p = Poly::monomial(deg);
    const double eta = std::pow(op_norm(p(a)) * op_norm(inverse(p(b))), 1.0 / deg);
    EXPECT_NEAR(eta, 0.25, 1e-12);
  }
  const auto est = eta_estimate(a, b, 8);
  ASSERT_EQ(est.rows.size(), 8u);
  for (std::size_t k = 1; k < est.rows.size(); ++k)
    EXPECT_LE(est.rows[k].running_min, est.rows[k - 1].running_min);
  EXPECT_LE(est.rows.back().running_min, 0.2625);
}

TEST(Eta, EqualMatricesNeverBelowOne) {
  Rand rng(55);
  const CMatrix a = rng.matrix(3, 3) + 2.0 * CMatrix::identity(3);
  EtaOptions o;
  o.keep_candidates = true;
  const auto est = eta_estimate(a, a, 4, o);
  ASSERT_FALSE(est.candidates.empty());
  for (const auto& c : est.candidates) EXPECT_GE(c.spectral, 1.0 - 1e-8) << c.origin;
}

TEST(Eta, ScalarDegreeOne) {
  // |a - c| / |b - c| with a = 1, b = 3: the minimum over the center grid.
  const auto est = eta_estimate(diag({1.0}), diag({3.0}), 1);
  double best = 1e300;
  for (const auto& [p, origin] : eta_candidates(diag({1.0}), 1)) {
    const cplx c = -p.coeff(0) / p.coeff(1);
    if (std::abs(3.0 - c) > 0) best = std::min(best, std::abs(1.0 - c) / std::abs(3.0 - c));
  }
  EXPECT_NEAR(est.rows[0].best, best, 1e-12);
}

TEST(Search, TrivialDegreeOne) {
  const CMatrix a = 2.0 * CMatrix::identity(2), b = -2.0 * CMatrix::identity(2);
  const auto r = search_separating_poly(a, b, CMatrix::zeros(2, 2));
  EXPECT_EQ(r.certificate.status, SeparationStatus::Separated);
  EXPECT_EQ(r.p.degree(), 1);
}

TEST(Search, SymmetricSkewFindsShiftedSquare) {
  const CMatrix a = diag({0.6, 1.0, 1.4});
  const CMatrix b{{0.0, 1.0}, {-1.0, 0.0}};
  SearchOptions so;
  so.min_degree = 2;
  const auto r = search_separating_poly(a, b, CMatrix::zeros(3, 2), so);
  EXPECT_EQ(r.certificate.status, SeparationStatus::Separated);
  EXPECT_EQ(r.p.degree(), 2);
}

TEST(Search, EqualMatricesFail) {
  Rand rng(56);
  const CMatrix a = rng.matrix(3, 3);
  const auto r = search_separating_poly(a, a, CMatrix::zeros(3, 3));
  EXPECT_NE(r.certificate.status, SeparationStatus::Separated);
  EXPECT_LE(r.certificate.score, 0.0);
}

TEST(Export, PgmAndCsvShape) {
  const GridRegion g = vp_grid(Poly::monomial(2), 1.0, kBox, 16);
  const std::string pgm = to_pgm(g);
  EXPECT_EQ(pgm.rfind("P2\n", 0), 0u);
  EXPECT_NE(pgm.find("\n16 16\n255\n"), std::string::npos);
  const std::string csv = to_csv(g);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 16);
}

#include <gtest/gtest.h>

#include "polysep/matcore.hpp"
#include "test_util.hpp"

using namespace polysep;
using polysep::testing::diag;
using polysep::testing::Rand;

TEST(Matcore, IdentityTimesX) {
  Rand rng(1);
  const CMatrix x = rng.matrix(3, 4);
  EXPECT_EQ((CMatrix::identity(3) * x).eigen(), x.eigen());
}

TEST(Matcore, ShiftByZeroIsIdentity) {
  Rand rng(2);
  const CMatrix a = rng.matrix(3, 3);
  EXPECT_EQ(a.shifted(0.0).eigen(), a.eigen());
}

TEST(Matcore, HandProduct) {
  const CMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const CMatrix b{{cplx(0, 1), 1.0}, {2.0, -1.0}};
  const CMatrix p = a * b;
  EXPECT_EQ(p(0, 0), cplx(4, 1));
  EXPECT_EQ(p(0, 1), cplx(-1, 0));
  EXPECT_EQ(p(1, 0), cplx(8, 3));
  EXPECT_EQ(p(1, 1), cplx(-1, 0));
}

TEST(Matcore, ShapeMismatchThrows) {
  EXPECT_THROW(CMatrix::identity(2) * CMatrix::identity(3), DimensionError);
  EXPECT_THROW(CMatrix::identity(2) + CMatrix::zeros(2, 3), DimensionError);
}

TEST(Matcore, NonFiniteRejected) {
  const std::vector<cplx> v{1.0, std::nan("")};
  EXPECT_THROW(CMatrix(1, 2, v), InvalidArgument);
}

TEST(Matcore, SolveLinearExamples) {
  Rand rng(3);
  const CMatrix c = rng.matrix(3, 2);
  EXPECT_LT((solve_linear(CMatrix::identity(3), c) - c).frobenius_norm(), 1e-15);
  const CMatrix x = solve_linear(diag({2.0, 4.0}), CMatrix::identity(2));
  EXPECT_NEAR(std::abs(x(0, 0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(x(1, 1) - 0.25), 0.0, 1e-15);
  EXPECT_EQ(x(0, 1), cplx(0.0));
}

TEST(Matcore, SolveLinearResidualRandom) {
  Rand rng(4);
  for (int k = 0; k < 20; ++k) {
    const CMatrix a = rng.matrix(6, 6) + 3.0 * CMatrix::identity(6);
    const CMatrix rhs = rng.matrix(6, 3);
    const CMatrix x = solve_linear(a, rhs);
    EXPECT_LE((a * x - rhs).frobenius_norm(), 1e-10 * op_norm(a) * op_norm(x));
  }
}

TEST(Matcore, SingularThrowsWithCondition) {
  const CMatrix s{{1.0, 2.0}, {2.0, 4.0}};
  try {
    solve_linear(s, CMatrix::identity(2));
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_GT(e.condition_estimate(), 1e14);
  }
}

TEST(Matcore, EigenvalueExamples) {
  auto sorted = [](std::vector<cplx> v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    return v;
  };
  auto e1 = sorted(eigenvalues(diag({1.0, -1.0})).values);
  EXPECT_NEAR(std::abs(e1[0] + 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e1[1] - 1.0), 0.0, 1e-14);
  const auto e2 = eigenvalues(CMatrix{{0.0, 1.0}, {0.0, 0.0}}).values;
  ASSERT_EQ(e2.size(), 2u);
  for (auto z : e2) EXPECT_LT(std::abs(z), 1e-12);
  // Companion matrix of z^2 - 3z + 2.
  auto e3 = sorted(eigenvalues(CMatrix{{0.0, -2.0}, {1.0, 3.0}}).values);
  EXPECT_NEAR(std::abs(e3[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(e3[1] - 2.0), 0.0, 1e-12);
}

TEST(Matcore, TriangularEigenvaluesAreDiagonal) {
  const CMatrix t{{2.0, 5.0, 1.0}, {0.0, cplx(0, 1), 3.0}, {0.0, 0.0, -4.0}};
  const auto ev = eigenvalues(t).values;
  for (cplx d : {cplx(2.0), cplx(0, 1), cplx(-4.0)}) {
    double best = 1e300;
    for (auto z : ev) best = std::min(best, std::abs(z - d));
    EXPECT_LT(best, 1e-12);
  }
}

TEST(Matcore, SpectrumResidualProperty) {
  Rand rng(5);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 8));
    const CMatrix t = rng.matrix(n, n);
    const Spectrum s = eigenvalues(t);
    EXPECT_EQ(s.values.size(), n);
    for (auto z : s.values)
      EXPECT_LE(smallest_singular_value(t.shifted(z)), 1e-8 * static_cast<double>(n) * op_norm(t));
  }
}

TEST(Matcore, OpNormExamples) {
  EXPECT_NEAR(op_norm(CMatrix::identity(4)), 1.0, 1e-14);
  EXPECT_NEAR(op_norm(diag({3.0, cplx(0, -4)})), 4.0, 1e-14);
  EXPECT_NEAR(op_norm(CMatrix{{0.0, 2.0}, {0.0, 0.0}}), 2.0, 1e-14);
}

TEST(Matcore, OpNormSubmultiplicative) {
  Rand rng(6);
  for (int k = 0; k < 30; ++k) {
    const CMatrix a = rng.matrix(5, 5), b = rng.matrix(5, 5);
    EXPECT_LE(op_norm(a * b), op_norm(a) * op_norm(b) + 1e-12);
  }
}

TEST(Matcore, ExpmExamples) {
  EXPECT_LT((expm(CMatrix::zeros(3, 3)) - CMatrix::identity(3)).frobenius_norm(), 1e-15);
  const CMatrix e = expm(diag({1.0, cplx(0, 2), -3.0}));
  EXPECT_NEAR(std::abs(e(0, 0) - std::exp(1.0)), 0.0, 1e-12 * std::exp(1.0));
  EXPECT_NEAR(std::abs(e(1, 1) - std::exp(cplx(0, 2))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(e(2, 2) - std::exp(-3.0)), 0.0, 1e-12);
  const CMatrix nil{{0.0, 1.0}, {0.0, 0.0}};
  EXPECT_LT((expm(nil) - (CMatrix::identity(2) + nil)).frobenius_norm(), 1e-15);
}

TEST(Matcore, ExpmMatchesTaylor) {
  Rand rng(7);
  for (int k = 0; k < 10; ++k) {
    CMatrix t = rng.matrix(4, 4);
    t = (1.0 / op_norm(t)) * t;
    CMatrix sum = CMatrix::identity(4), term = CMatrix::identity(4);
    for (int n = 1; n <= 20; ++n) {
      term = (1.0 / n) * (term * t);
      sum = sum + term;
    }
    EXPECT_LE((expm(t) - sum).frobenius_norm(), 1e-12 * sum.frobenius_norm());
  }
}

TEST(Matcore, SmallestSingularValueExamples) {
  EXPECT_NEAR(smallest_singular_value(CMatrix::identity(3)), 1.0, 1e-14);
  EXPECT_NEAR(smallest_singular_value(diag({2.0, 0.1})), 0.1, 1e-14);
  EXPECT_LT(smallest_singular_value(CMatrix{{1.0, 2.0}, {2.0, 4.0}}), 1e-14);
  Rand rng(8);
  const CMatrix a = rng.matrix(5, 5) + 2.0 * CMatrix::identity(5);
  EXPECT_NEAR(smallest_singular_value(a), 1.0 / op_norm(inverse(a)), 1e-12);
}

TEST(Matcore, KronAndBlocks) {
  const CMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const CMatrix k = kron(CMatrix::identity(2), a);
  EXPECT_EQ(k.rows(), 4u);
  EXPECT_EQ(k(2, 3), cplx(2.0));
  EXPECT_EQ(k(0, 2), cplx(0.0));
  const CMatrix m = CMatrix::blocks(a, a, a, a);
  EXPECT_EQ(m.block(2, 2, 2, 2).eigen(), a.eigen());
}

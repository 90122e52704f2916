#include <gtest/gtest.h>

#include "polysep/bivarcalc.hpp"
#include "test_util.hpp"

using namespace polysep;
using polysep::testing::diag;
using polysep::testing::Rand;

namespace {

CMatrix power(const CMatrix& t, int k) {
  CMatrix r = CMatrix::identity(t.rows());
  for (int i = 0; i < k; ++i) r = r * t;
  return r;
}

// sum a_ij A^i C B^j by explicit powers, independent of apply().
CMatrix expand(const std::vector<BivarTerm>& terms, const CMatrix& a, const CMatrix& b,
               const CMatrix& c) {
  CMatrix out = CMatrix::zeros(c.rows(), c.cols());
  for (const auto& t : terms) out = out + t.coeff * (power(a, t.i) * c * power(b, t.j));
  return out;
}

BivarPoly random_generic(Rand& rng, int deg) {
  std::vector<BivarTerm> t;
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j) t.push_back({i, j, rng.complex()});
  return BivarPoly::generic(t);
}

}  // namespace

TEST(Bivarcalc, LambdaPlusMu) {
  Rand rng(21);
  const CMatrix a = rng.matrix(3, 3), b = rng.matrix(2, 2), c = rng.matrix(3, 2);
  const BivarPoly f = BivarPoly::generic({{1, 0, 1.0}, {0, 1, 1.0}});
  EXPECT_LT((apply(f, a, b, c) - (a * c + c * b)).frobenius_norm(), 1e-14);
}

TEST(Bivarcalc, OneLeavesCUnchanged) {
  Rand rng(22);
  const CMatrix a = rng.matrix(3, 3), b = rng.matrix(2, 2), c = rng.matrix(3, 2);
  EXPECT_EQ(apply(BivarPoly::one(), a, b, c).eigen(), c.eigen());
}

TEST(Bivarcalc, ScalarProduct) {
  const CMatrix x = apply(BivarPoly::generic({{1, 1, 1.0}}), diag({2.0}), diag({3.0}), diag({1.0}));
  EXPECT_EQ(x(0, 0), cplx(6.0));
}

TEST(Bivarcalc, ShapeMismatchThrows) {
  EXPECT_THROW(apply(BivarPoly::one(), CMatrix::identity(2), CMatrix::identity(3),
                     CMatrix::zeros(3, 3)),
               DimensionError);
}

TEST(Bivarcalc, ScalarConsistency) {
  Rand rng(23);
  for (int k = 0; k < 20; ++k) {
    const BivarPoly f = random_generic(rng, 4);
    const cplx a = rng.complex(), b = rng.complex(), c = rng.complex();
    const CMatrix x = apply(f, diag({a}), diag({b}), diag({c}));
    EXPECT_LT(std::abs(x(0, 0) - f(a, b) * c), 1e-13);
  }
}

TEST(Bivarcalc, GenericMatchesExpansion) {
  Rand rng(24);
  const BivarPoly f = random_generic(rng, 4);
  const CMatrix a = rng.matrix(4, 4), b = rng.matrix(3, 3), c = rng.matrix(4, 3);
  const CMatrix ref = expand(f.terms(), a, b, c);
  EXPECT_LT((apply(f, a, b, c) - ref).frobenius_norm(), 1e-12 * ref.frobenius_norm());
}

TEST(Bivarcalc, DividedDifferenceFormsAgree) {
  Rand rng(25);
  for (int k = 0; k < 10; ++k) {
    const Poly p = rng.poly(rng.integer(1, 6));
    const BivarPoly q = divided_difference(p);
    ASSERT_TRUE(q.is_divided_difference());
    const BivarPoly g = BivarPoly::generic(q.terms());
    const cplx l = rng.complex(), m = rng.complex();
    EXPECT_LT(std::abs(q(l, m) - g(l, m)), 1e-12);
    if (std::abs(l - m) > 0.1) EXPECT_LT(std::abs(q(l, m) - (p(l) - p(m)) / (l - m)), 1e-11);
    const CMatrix a = rng.matrix(3, 3), b = rng.matrix(3, 3), c = rng.matrix(3, 3);
    const CMatrix ref = expand(q.terms(), a, b, c);
    EXPECT_LT((apply(q, a, b, c) - ref).frobenius_norm(), 1e-11 * (1 + ref.frobenius_norm()));
  }
}

TEST(Bivarcalc, DividedDifferenceExamples) {
  // z^2: q = lambda + mu.
  const auto q2 = divided_difference(Poly::monomial(2)).terms();
  ASSERT_EQ(q2.size(), 2u);
  // z^4 - 1: q = l^3 + l^2 m + l m^2 + m^3.
  const auto q4 = divided_difference(Poly(std::vector<cplx>{-1.0, 0.0, 0.0, 0.0, 1.0})).terms();
  ASSERT_EQ(q4.size(), 4u);
  for (const auto& t : q4) {
    EXPECT_EQ(t.i + t.j, 3);
    EXPECT_EQ(t.coeff, cplx(1.0));
  }
}

TEST(Bivarcalc, SylvesterIdentity) {
  Rand rng(26);
  for (int k = 0; k < 10; ++k) {
    const CMatrix a = rng.matrix(5, 5), b = rng.matrix(4, 4), x = rng.matrix(5, 4);
    const CMatrix ref = a * x - x * b;
    EXPECT_LE((apply(BivarPoly::sylvester(), a, b, x) - ref).frobenius_norm(),
              1e-13 * ref.frobenius_norm());
  }
}

TEST(Bivarcalc, FactorizationIdentity) {
  Rand rng(27);
  for (int k = 0; k < 10; ++k) {
    const Poly p = rng.poly(rng.integer(1, 6));
    const CMatrix a = rng.matrix(4, 4), b = rng.matrix(3, 3), c = rng.matrix(4, 3);
    const CMatrix lhs =
        apply(BivarPoly::sylvester(), a, b, apply(divided_difference(p), a, b, c));
    const CMatrix rhs = p(a) * c - c * p(b);
    EXPECT_LE((lhs - rhs).frobenius_norm(), 1e-10 * (1 + rhs.frobenius_norm()));
    const CMatrix rhs2 = apply(BivarPoly::difference_of(p), a, b, c);
    EXPECT_LE((lhs - rhs2).frobenius_norm(), 1e-10 * (1 + rhs.frobenius_norm()));
  }
}

TEST(Bivarcalc, CompositionExamples) {
  Rand rng(28);
  const CMatrix a = rng.matrix(4, 4), b = rng.matrix(4, 4), c = rng.matrix(4, 4);
  EXPECT_LE(composition_check(BivarPoly::lambda(), BivarPoly::mu(), a, b, c), 1e-12);
  EXPECT_EQ(composition_check(BivarPoly::one(), random_generic(rng, 3), a, b, c), 0.0);
  for (int k = 0; k < 10; ++k) {
    const BivarPoly g = random_generic(rng, 3), f = random_generic(rng, 3);
    const double scale = expand((g * f).terms(), a, b, c).frobenius_norm();
    EXPECT_LE(composition_check(g, f, a, b, c), 1e-10 * (1 + scale));
  }
}

TEST(Bivarcalc, BlockPowerFirstAndSquare) {
  Rand rng(29);
  const CMatrix a = rng.matrix(3, 3), b = rng.matrix(2, 2), c = rng.matrix(3, 2);
  const Poly p = rng.poly(3);
  const CMatrix k1 = block_poly_power(p, a, b, c, 1);
  const CMatrix ref1 =
      CMatrix::blocks(p(a), apply(divided_difference(p), a, b, c), CMatrix::zeros(2, 3), p(b));
  EXPECT_LT((k1 - ref1).frobenius_norm(), 1e-12 * ref1.frobenius_norm());
  const CMatrix k2 = block_poly_power(Poly::monomial(1), a, b, c, 2);
  const CMatrix ref2 = CMatrix::blocks(a * a, a * c + c * b, CMatrix::zeros(2, 3), b * b);
  EXPECT_LT((k2 - ref2).frobenius_norm(), 1e-13 * ref2.frobenius_norm());
}

TEST(Bivarcalc, BlockPowerMatchesDense) {
  Rand rng(30);
  for (int it = 0; it < 20; ++it) {
    const std::size_t m = static_cast<std::size_t>(rng.integer(1, 8));
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 8));
    const CMatrix a = rng.matrix(m, m, 0.4), b = rng.matrix(n, n, 0.4), c = rng.matrix(m, n, 0.4);
    const Poly p = rng.poly(rng.integer(1, 5), 0.5);
    const int k = rng.integer(0, 6);
    const CMatrix ref = power(p(block_triangular(a, b, c)), k);
    EXPECT_LE((block_poly_power(p, a, b, c, k) - ref).frobenius_norm(),
              1e-10 * std::max(1.0, ref.frobenius_norm()));
  }
}

TEST(Bivarcalc, LadderMatchesDense) {
  Rand rng(31);
  const CMatrix r = rng.matrix(3, 3, 0.5), s = rng.matrix(2, 2, 0.5), t = rng.matrix(3, 2, 0.5);
  const CMatrix m = block_triangular(r, s, t);
  BlockPowerLadder ladder(r, s, t);
  CMatrix ref = CMatrix::identity(5);
  for (int k = 0; k < 8; ++k) {
    EXPECT_EQ(ladder.exponent(), k);
    EXPECT_LE((ladder.assembled() - ref).frobenius_norm(), 1e-12 * (1 + ref.frobenius_norm()));
    ladder.advance();
    ref = ref * m;
  }
}

TEST(Bivarcalc, NormEstimateExamples) {
  const auto one = op_norm_estimate(BivarPoly::one(), CMatrix::identity(2), CMatrix::identity(2));
  EXPECT_NEAR(one.upper, 1.0, 1e-14);
  EXPECT_NEAR(one.lower, 1.0, 1e-12);
  const BivarPoly sum = BivarPoly::generic({{1, 0, 1.0}, {0, 1, 1.0}});
  const auto s = op_norm_estimate(sum, CMatrix::identity(2), CMatrix::identity(2));
  EXPECT_NEAR(s.upper, 2.0, 1e-14);
  EXPECT_LE(s.lower, 2.0 + 1e-12);
  const auto t = op_norm_estimate(sum, diag({3.0, 1.0}), diag({4.0, 0.5}));
  EXPECT_NEAR(t.upper, 7.0, 1e-12);
  EXPECT_LE(t.lower, t.upper + 1e-12);
  EXPECT_NEAR(op_norm_upper(sum, 3.0, 4.0), 7.0, 1e-14);
}

TEST(Bivarcalc, NormEstimateBracketsRandom) {
  Rand rng(32);
  for (int k = 0; k < 10; ++k) {
    const BivarPoly f = random_generic(rng, 3);
    const CMatrix a = rng.matrix(3, 3), b = rng.matrix(3, 3);
    const auto e = op_norm_estimate(f, a, b);
    EXPECT_GE(e.lower, 0.0);
    EXPECT_LE(e.lower, e.upper * (1 + 1e-12));
  }
}

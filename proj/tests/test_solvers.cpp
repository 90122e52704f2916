#include <gtest/gtest.h>

#include "polysep/bivarcalc.hpp"
#include "polysep/generate.hpp"
#include "polysep/solvers.hpp"
#include "test_util.hpp"

using namespace polysep;
using polysep::testing::diag;
using polysep::testing::Rand;
using polysep::testing::rel_err;

namespace {

SylvesterProblem scalar(cplx a, cplx b, cplx c, Method m) {
  SylvesterProblem p;
  p.a = diag({a});
  p.b = diag({b});
  p.c = diag({c});
  p.method = m;
  return p;
}

SylvesterProblem from_config(const ProblemConfig& cfg, Method m) {
  SylvesterProblem p;
  p.a = *cfg.a;
  p.b = *cfg.b;
  p.c = *cfg.c;
  p.method = m;
  if (cfg.polynomial) p.p = cfg.polynomial->to_poly();
  return p;
}

// X_ij = C_ij / (a_i - b_j) for diagonal A and B.
CMatrix diagonal_solution(const std::vector<cplx>& a, const std::vector<cplx>& b,
                          const CMatrix& c) {
  std::vector<cplx> x;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) x.push_back(c(i, j) / (a[i] - b[j]));
  return CMatrix(a.size(), b.size(), x);
}

}  // namespace

TEST(Oracle, ScalarExact) {
  const auto r = solve(scalar(2.0, -1.0, 3.0, Method::Oracle));
  EXPECT_LT(std::abs(r.x(0, 0) - 1.0), 1e-14);
  EXPECT_LT(r.residual, 1e-14);
}

TEST(Oracle, DecoupledRows) {
  SylvesterProblem p;
  p.a = diag({2.0, 3.0});
  p.b = diag({0.0});
  p.c = CMatrix{{1.0}, {1.0}};
  const auto r = solve(p);
  EXPECT_LT(std::abs(r.x(0, 0) - 0.5), 1e-15);
  EXPECT_LT(std::abs(r.x(1, 0) - 1.0 / 3.0), 1e-15);
}

TEST(Oracle, RandomShiftedSpectra) {
  Rand rng(61);
  SylvesterProblem p;
  p.a = rng.shifted(6, 0.5);
  p.b = rng.shifted(5, -0.5);
  p.c = rng.matrix(6, 5);
  const auto r = solve(p);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_NEAR(r.residual, relative_residual(p.a, p.b, p.c, r.x), 1e-14);
}

TEST(Oracle, OverlapRejected) {
  EXPECT_THROW(solve(scalar(1.0, 1.0, 1.0, Method::Oracle)), SpectralOverlapError);
}

TEST(Oracle, FactorizationIdentity) {
  Rand rng(62);
  SylvesterProblem p;
  p.a = rng.shifted(4, 0.5);
  p.b = rng.shifted(3, -0.5);
  p.c = rng.matrix(4, 3);
  const CMatrix x = solve(p).x;
  const CMatrix i4 = CMatrix::identity(4), i3 = CMatrix::identity(3);
  const CMatrix z34 = CMatrix::zeros(3, 4), z43 = CMatrix::zeros(4, 3);
  const CMatrix left = CMatrix::blocks(i4, -x, z34, i3);
  const CMatrix right = CMatrix::blocks(i4, x, z34, i3);
  const CMatrix m = block_triangular(p.a, p.b, p.c);
  const CMatrix f = left * CMatrix::blocks(p.a, z43, z34, p.b) * right;
  EXPECT_LE((f - m).frobenius_norm(), 1e-12 * op_norm(m));
}

TEST(Validate, ShapesAndTolerance) {
  SylvesterProblem p = scalar(1.0, -1.0, 1.0, Method::Oracle);
  p.c = CMatrix::zeros(2, 1);
  EXPECT_THROW(solve(p), DimensionError);
  p = scalar(1.0, -1.0, 1.0, Method::Oracle);
  p.tol = 0.0;
  EXPECT_THROW(solve(p), InvalidArgument);
}

TEST(Rosenblum, ScalarUnitCircle) {
  auto p = scalar(2.0, -1.0, 3.0, Method::Rosenblum);
  p.contour = CircleSet{{2.0, 1.0}};
  const auto r = solve(p);
  EXPECT_LT(std::abs(r.x(0, 0) - 1.0), 1e-12);
}

TEST(Rosenblum, DiagonalClosedForm) {
  Rand rng(63);
  const std::vector<cplx> a{1.0, cplx(1.5, 0.5), 2.0}, b{-1.0, cplx(-0.5, -1.0)};
  SylvesterProblem p;
  p.a = CMatrix::diagonal(a);
  p.b = CMatrix::diagonal(b);
  p.c = rng.matrix(3, 2);
  p.method = Method::Rosenblum;
  EXPECT_LE(rel_err(solve(p).x, diagonal_solution(a, b, p.c)), 1e-9);
}

TEST(Rosenblum, RejectsContourAroundB) {
  auto p = scalar(2.0, -1.0, 3.0, Method::Rosenblum);
  p.contour = CircleSet{{0.0, 5.0}};
  EXPECT_THROW(solve(p), CertificateError);
}

TEST(Rosenblum, MatchesOracle) {
  Rand rng(64);
  SylvesterProblem p;
  p.a = rng.shifted(5, 0.5);
  p.b = rng.shifted(4, -0.5);
  p.c = rng.matrix(5, 4);
  const CMatrix ref = solve(p).x;
  p.method = Method::Rosenblum;
  EXPECT_LE(rel_err(solve(p).x, ref), 1e-8);
}

TEST(DiscSeries, GeometricScalar) {
  auto p = scalar(0.5, 2.0, 1.0, Method::DiscSeries);
  p.p = Poly::monomial(1);
  const auto r = solve(p);
  EXPECT_LT(std::abs(r.x(0, 0) + 2.0 / 3.0), 1e-10);
  EXPECT_LE(r.residual, 1e-10);
}

TEST(DiscSeries, ZeroRightHandSide) {
  auto p = scalar(0.5, 2.0, 0.0, Method::DiscSeries);
  p.p = Poly::monomial(1);
  const auto r = solve(p);
  EXPECT_EQ(r.x(0, 0), cplx(0.0));
  EXPECT_EQ(r.order, 0);
}

TEST(DiscSeries, SymmetricSkewMatchesOracle) {
  const ProblemConfig cfg = generate("symmetric-skew", 6, 1);
  SylvesterProblem p = from_config(cfg, Method::Oracle);
  const CMatrix ref = solve(p).x;
  p.method = Method::DiscSeries;
  const auto r = solve(p);
  EXPECT_LE(rel_err(r.x, ref), 1e-8);
  EXPECT_LE(r.diagnostics.at("variant_difference"), 1e-8);
}

TEST(DiscSeries, SquareRouteReconstruction) {
  // Y solves p(A)Y - Y p(B) = C for p = z^2 - s; X = AY + YB.
  const ProblemConfig cfg = generate("symmetric-skew", 4, 3);
  const CMatrix a = *cfg.a, b = *cfg.b, c = *cfg.c;
  const Poly p = cfg.polynomial->to_poly();
  SylvesterProblem sq;
  sq.a = p(a);
  sq.b = p(b);
  sq.c = c;
  const CMatrix y = solve(sq).x;
  const CMatrix x = a * y + y * b;
  EXPECT_LE(relative_residual(a, b, c, x), 1e-8);
}

TEST(DiscSeries, DivergesWhenNotSeparated) {
  auto p = scalar(2.0, 0.5, 1.0, Method::DiscSeries);
  p.p = Poly::monomial(1);
  EXPECT_THROW(solve(p), ApplicabilityError);
}

TEST(DiscSeries, SingularPOfB) {
  auto p = scalar(2.0, 0.0, 1.0, Method::DiscSeries);
  p.p = Poly::monomial(1);
  EXPECT_THROW(solve(p), SingularityError);
}

TEST(DiscBoundTest, ScalarBoundAboveInverse) {
  const Poly p = Poly::monomial(1);
  const CMatrix a = diag({0.5}), b = diag({2.0});
  const DiscBound d = truncation_bound_disc(p, a, b, 0.2, 1e-8);
  EXPECT_GE(d.inverse_bound, 1.0 / std::abs(p(0.5) - p(2.0)));
  EXPECT_GT(d.delta, 0.0);
  EXPECT_LT(d.r, 1.0);
}

TEST(DiscBoundTest, FarAwayGivesSmallOrder) {
  const Poly p = Poly::monomial(1);
  const DiscBound d = truncation_bound_disc(p, diag({0.01}), diag({100.0}), 1.0, 1e-1);
  EXPECT_LE(d.order, 1);
}

TEST(DiscBoundTest, RejectsOverlap) {
  EXPECT_THROW(truncation_bound_disc(Poly::monomial(1), diag({1.0}), diag({1.1}), 0.5, 1e-8),
               CertificateError);
}

TEST(DiscBoundTest, SoundOnRandomInstances) {
  Rand rng(65);
  int checked = 0;
  for (int it = 0; it < 20; ++it) {
    const ProblemConfig cfg = generate("normal-disc", static_cast<std::size_t>(rng.integer(2, 6)),
                                       static_cast<std::uint64_t>(100 + it));
    const CMatrix a = *cfg.a, b = *cfg.b, c = *cfg.c;
    const Poly p = Poly::monomial(1);
    const DiscBound d = truncation_bound_disc(p, a, b, 0.3, 1e-8);
    SylvesterProblem o;
    o.a = a;
    o.b = b;
    o.c = c;
    const CMatrix x = solve(o).x;
    const CMatrix s_inv = inverse(p(b));
    const double nc = op_norm(c);
    for (int n : {0, 2, 5, d.order}) {
      const CMatrix xn =
          apply(divided_difference(p), a, b, disc_series_partial(p(a), s_inv, c, n));
      EXPECT_LE(op_norm(xn - x), d.error_bound(n, nc) * (1 + 1e-9)) << "n = " << n;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}

TEST(Heinz, ScalarIntegral) {
  const auto r = solve(scalar(1.0, -1.0, 2.0, Method::Heinz));
  EXPECT_LT(std::abs(r.x(0, 0) - 1.0), 1e-9);
}

TEST(Heinz, DiagonalClosedForm) {
  Rand rng(66);
  const std::vector<cplx> a{0.5, cplx(1.0, 2.0)}, b{-0.3, cplx(-1.0, -0.5), -2.0};
  SylvesterProblem p;
  p.a = CMatrix::diagonal(a);
  p.b = CMatrix::diagonal(b);
  p.c = rng.matrix(2, 3);
  p.method = Method::Heinz;
  EXPECT_LE(rel_err(solve(p).x, diagonal_solution(a, b, p.c)), 1e-8);
}

TEST(Heinz, NeedsImaginaryAxisSeparation) {
  SylvesterProblem p = scalar(1.0, 2.0, 1.0, Method::Heinz);
  p.shift = 0.0;
  EXPECT_THROW(solve(p), ApplicabilityError);
}

TEST(Heinz, MatchesOracle) {
  Rand rng(67);
  SylvesterProblem p;
  p.a = rng.shifted(4, 0.5);
  p.b = rng.shifted(4, -0.5);
  p.c = rng.matrix(4, 4);
  const CMatrix ref = solve(p).x;
  p.method = Method::Heinz;
  EXPECT_LE(rel_err(solve(p).x, ref), 1e-7);
}

TEST(SignNewton, Involution) {
  const auto r = solve(scalar(1.0, -1.0, cplx(0.3, 0.7), Method::SignNewton));
  EXPECT_LT(std::abs(r.x(0, 0) - cplx(0.15, 0.35)), 1e-14);
  EXPECT_LE(r.iterations, 2);
}

TEST(SignNewton, IdentityPairGivesHalfC) {
  Rand rng(68);
  SylvesterProblem p;
  p.a = CMatrix::identity(3);
  p.b = -1.0 * CMatrix::identity(2);
  p.c = rng.matrix(3, 2);
  p.method = Method::SignNewton;
  EXPECT_LE(rel_err(solve(p).x, 0.5 * p.c), 1e-14);
}

TEST(SignNewton, MatchesOracle) {
  Rand rng(69);
  SylvesterProblem p;
  p.a = rng.shifted(5, 0.5);
  p.b = rng.shifted(3, -0.5);
  p.c = rng.matrix(5, 3);
  const CMatrix ref = solve(p).x;
  p.method = Method::SignNewton;
  EXPECT_LE(rel_err(solve(p).x, ref), 1e-8);
}

TEST(Multicentric, ScalarHalfC) {
  auto p = scalar(1.0, -1.0, 0.2, Method::Multicentric);
  const std::vector<cplx> r{1.0, -1.0};
  p.p = Poly::from_roots(r);
  const auto res = solve(p);
  EXPECT_LT(std::abs(res.x(0, 0) - 0.1), 1e-9);
}

TEST(Multicentric, ZeroCouplingGivesDiagonalProjector) {
  auto p = scalar(1.0, -1.0, 0.0, Method::Multicentric);
  const std::vector<cplx> r{1.0, -1.0};
  p.p = Poly::from_roots(r);
  const auto res = solve(p);
  EXPECT_LT(std::abs(res.x(0, 0)), 1e-12);
  EXPECT_LT(res.diagnostics.at("projector_q11"), 1e-9);
  EXPECT_LT(res.diagnostics.at("projector_q22"), 1e-9);
}

TEST(Multicentric, ProjectorLaws) {
  const ProblemConfig cfg = generate("selfadjoint-pair", 4, 1);
  SylvesterProblem p = from_config(cfg, Method::Multicentric);
  p.tol = 1e-8;
  const auto res = solve(p);
  ASSERT_TRUE(res.bound.has_value());
  const double b = *res.bound;
  EXPECT_LE(res.diagnostics.at("projector_idempotency"), 4 * b);
  EXPECT_LE(res.diagnostics.at("projector_q11"), 2 * b);
  EXPECT_LE(res.diagnostics.at("projector_q21"), 2 * b);
  EXPECT_LE(res.diagnostics.at("projector_q22"), 2 * b);
}

TEST(Multicentric, NotSeparatedIsInapplicable) {
  auto p = scalar(1.0, -1.0, 0.2, Method::Multicentric);
  p.p = Poly::monomial(2);
  EXPECT_THROW(solve(p), ApplicabilityError);
}

TEST(SignSeriesM2, Coefficients) {
  const auto c = inverse_sqrt_coefficients(5);
  EXPECT_EQ(c[0], Rational(1));
  EXPECT_EQ(c[1], Rational(-1, 2));
  EXPECT_EQ(c[2], Rational(3, 8));
  EXPECT_EQ(c[3], Rational(-5, 16));
  EXPECT_EQ(c[4], Rational(35, 128));
}

TEST(SignSeriesM2, ZeroCoupling) {
  const auto r = solve(scalar(1.0, -1.0, 0.0, Method::SignSeriesM2));
  EXPECT_EQ(r.x(0, 0), cplx(0.0));
}

TEST(SignSeriesM2, NormalizedScalarPair) {
  auto p = scalar(0.9, cplx(0, 0.8), 1.0, Method::SignSeriesM2);
  const CMatrix ref = solve(scalar(0.9, cplx(0, 0.8), 1.0, Method::Oracle)).x;
  const auto r = solve(p);
  EXPECT_LE(rel_err(r.x, ref), 1e-7);
}

TEST(SignSeriesM2, DivergesOutsideDisc) {
  EXPECT_THROW(solve(scalar(2.0, -2.0, 1.0, Method::SignSeriesM2)), DivergenceError);
}

TEST(CrossMethod, PairwiseAgreement) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const ProblemConfig cfg = generate("agreement", 3, seed);
    SylvesterProblem p = from_config(cfg, Method::Oracle);
    const CMatrix ref = solve(p).x;
    std::vector<std::pair<Method, CMatrix>> xs;
    for (Method m : all_methods()) {
      if (m == Method::Oracle) continue;
      SylvesterProblem q = p;
      q.method = m;
      if (m == Method::DiscSeries) q.p = Poly(std::vector<cplx>{-0.8, 0.0, 1.0});
      const auto r = solve(q);
      EXPECT_NEAR(r.residual, relative_residual(q.a, q.b, q.c, r.x), 1e-14);
      xs.emplace_back(m, r.x);
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j)
        EXPECT_LE((xs[i].second - xs[j].second).frobenius_norm(),
                  10 * (2 * p.tol) * ref.frobenius_norm())
            << to_string(xs[i].first) << " vs " << to_string(xs[j].first);
  }
}

TEST(Methods, NameRoundTrip) {
  for (Method m : all_methods()) EXPECT_EQ(method_from_string(to_string(m)), m);
  EXPECT_THROW(method_from_string("bartels"), InvalidArgument);
}

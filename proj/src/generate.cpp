#include "polysep/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "polysep/bivarcalc.hpp"
#include "polysep/errors.hpp"
#include "polysep/solvers.hpp"

namespace polysep {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double normal() { return normal_(eng_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(eng_); }
  int sign() { return unit_(eng_) < 0.5 ? -1 : 1; }

  Eigen::MatrixXd real_gauss(std::size_t r, std::size_t c) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = 0; k < m.cols(); ++k) m(i, k) = normal();
    return m;
  }
  EMatrix complex_gauss(std::size_t r, std::size_t c) {
    EMatrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        const double re = normal();
        const double im = normal();
        m(i, k) = cplx(re, im) / std::sqrt(2.0);
      }
    return m;
  }
  Eigen::MatrixXd orthogonal(std::size_t n) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(real_gauss(n, n));
    return qr.householderQ();
  }
  EMatrix unitary(std::size_t n) {
    Eigen::HouseholderQR<EMatrix> qr(complex_gauss(n, n));
    return qr.householderQ();
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

CMatrix from_real(const Eigen::MatrixXd& m) { return CMatrix::from_eigen(m.cast<cplx>()); }

CMatrix scaled_to(const CMatrix& c, double norm) {
  return (norm / op_norm(c)) * c;
}

void require(bool ok, const std::string& family, const std::string& what) {
  if (!ok) throw Error("generate " + family + ": contract violated (" + what + ")");
}

std::size_t even_size(std::size_t n) { return std::max<std::size_t>(2, n - n % 2); }

double min_real(const std::vector<cplx>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& z : v) m = std::min(m, z.real());
  return m;
}

double max_real(const std::vector<cplx>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& z : v) m = std::max(m, z.real());
  return m;
}

double min_abs(const std::vector<cplx>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& z : v) m = std::min(m, std::abs(z));
  return m;
}

/// Eigenvalues of a real symmetric (or Hermitian) matrix, taken real.
std::pair<double, double> hermitian_range(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<EMatrix> es(h.eigen(), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

double rho_m4(const std::vector<cplx>& ea, const std::vector<cplx>& eb) {
  double r = 0.0;
  for (const auto& z : ea) r = std::max(r, std::abs(std::pow(z, 4) - 1.0));
  for (const auto& z : eb) r = std::max(r, std::abs(std::pow(z, 4) - 1.0));
  return r;
}

ProblemConfig symmetric_skew(std::size_t n, Rng& rng) {
  const std::string fam = "symmetric-skew";
  const std::size_t nb = even_size(n);
  Eigen::VectorXd da(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < da.size(); ++k) da(k) = rng.uniform(0.5, 1.5);
  const Eigen::MatrixXd qa = rng.orthogonal(n);
  Eigen::MatrixXd a = qa * da.asDiagonal() * qa.transpose();
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  for (Eigen::Index k = 0; k + 1 < blk.rows(); k += 2) {
    const double w = rng.uniform(0.5, 1.5);
    blk(k, k + 1) = w;
    blk(k + 1, k) = -w;
  }
  const Eigen::MatrixXd qb = rng.orthogonal(nb);
  Eigen::MatrixXd b = qb * blk * qb.transpose();
  b = 0.5 * (b - b.transpose()).eval();
  Eigen::MatrixXd c = rng.real_gauss(n, nb);
  c /= c.norm();

  ProblemConfig cfg;
  cfg.a = from_real(a);
  cfg.b = from_real(b);
  cfg.c = from_real(c);
  cfg.method = "disc-series";
  cfg.polynomial = PolySpec{std::nullopt, std::vector<cplx>{-1.25, 0.0, 1.0}, 1.0};
  cfg.tol = 1e-10;

  const auto ea = eigenvalues(*cfg.a).values;
  const auto eb = eigenvalues(*cfg.b).values;
  const auto [amin, amax] = hermitian_range(*cfg.a);
  const double sym = (a - a.transpose()).norm();
  const double skew = (b + b.transpose()).norm();
  require(sym == 0.0 && skew == 0.0, fam, "exact symmetry");
  require(amin >= 0.5 - 1e-12 && amax <= 1.5 + 1e-12, fam, "sigma(A) in [0.5, 1.5]");
  require(min_abs(eb) > 0.4, fam, "B nonsingular");
  const Poly p(*cfg.polynomial->coefficients);
  double rho_a = 0.0, min_b = std::numeric_limits<double>::infinity();
  for (const auto& z : ea) rho_a = std::max(rho_a, std::abs(p(z)));
  for (const auto& z : eb) min_b = std::min(min_b, std::abs(p(z)));
  require(rho_a / min_b < 1.0, fam, "disc separation for z^2 - 1.25");
  cfg.stamp = {{"a_eig_min", amin},          {"a_eig_max", amax},
               {"b_min_abs_eig", min_abs(eb)}, {"symmetry_defect", sym},
               {"skew_defect", skew},          {"spectral_ratio", rho_a / min_b},
               {"verified", 1.0}};
  return cfg;
}

ProblemConfig selfadjoint_pair(std::size_t n, Rng& rng) {
  const std::string fam = "selfadjoint-pair";
  const double alpha = 0.7;
  auto hermitian = [&]() {
    Eigen::VectorXd d(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < d.size(); ++k) d(k) = rng.sign() * rng.uniform(std::sqrt(alpha), 1.0);
    const EMatrix u = rng.unitary(n);
    EMatrix h = u * d.cast<cplx>().asDiagonal() * u.adjoint();
    return EMatrix(0.5 * (h + h.adjoint()));
  };
  const EMatrix ha = hermitian();
  const EMatrix hb = hermitian();
  ProblemConfig cfg;
  cfg.a = CMatrix::from_eigen(ha);
  cfg.b = CMatrix::from_eigen(cplx(0.0, -1.0) * hb);
  const Poly p = Poly::from_roots(std::vector<cplx>{1.0, -1.0, cplx(0, 1), cplx(0, -1)});
  CMatrix c = scaled_to(CMatrix::from_eigen(rng.complex_gauss(n, n)), 0.05);
  for (int k = 0; k < 20 && op_norm(p(block_triangular(*cfg.a, *cfg.b, c))) > 0.6; ++k) c = 0.5 * c;
  cfg.c = c;
  cfg.method = "multicentric";
  cfg.polynomial = PolySpec{std::vector<cplx>{1.0, -1.0, cplx(0, 1), cplx(0, -1)}, std::nullopt, 1.0};
  cfg.tol = 1e-10;

  const auto ea = eigenvalues(*cfg.a).values;
  const auto eb = eigenvalues(*cfg.b).values;
  const CMatrix a2 = *cfg.a * *cfg.a;
  const CMatrix mb2 = -(*cfg.b * *cfg.b);
  const auto [a2min, a2max] = hermitian_range(a2);
  const auto [b2min, b2max] = hermitian_range(mb2);
  const double norm_pm = op_norm(p(block_triangular(*cfg.a, *cfg.b, c)));
  const double herm_a = (cfg.a->eigen() - cfg.a->eigen().adjoint()).norm();
  const double herm_ib = (cplx(0, 1) * cfg.b->eigen() - (cplx(0, 1) * cfg.b->eigen()).adjoint()).norm();
  require(op_norm(*cfg.a) <= 1.0 + 1e-12 && op_norm(*cfg.b) <= 1.0 + 1e-12, fam, "norms at most 1");
  require(a2min >= alpha - 1e-12 && b2min >= alpha - 1e-12, fam, "sigma(A^2), sigma(-B^2) in [alpha, 1]");
  require(rho_m4(ea, eb) < 1.0, fam, "rho(M^4 - I) < 1");
  require(norm_pm <= 0.6, fam, "|p(M)| <= 0.6");
  cfg.stamp = {{"alpha", alpha},
               {"norm_a", op_norm(*cfg.a)},
               {"norm_b", op_norm(*cfg.b)},
               {"a2_eig_min", a2min},
               {"a2_eig_max", a2max},
               {"minus_b2_eig_min", b2min},
               {"minus_b2_eig_max", b2max},
               {"hermitian_defect_a", herm_a},
               {"hermitian_defect_ib", herm_ib},
               {"rho_m4_minus_i", rho_m4(ea, eb)},
               {"norm_pm", norm_pm},
               {"verified", 1.0}};
  return cfg;
}

ProblemConfig shifted_random(std::size_t n, Rng& rng) {
  const std::string fam = "shifted-random";
  const double s = std::sqrt(static_cast<double>(n));
  CMatrix a = CMatrix::from_eigen(rng.complex_gauss(n, n) / s);
  CMatrix b = CMatrix::from_eigen(rng.complex_gauss(n, n) / s);
  a = a.shifted(min_real(eigenvalues(a).values) - 1.0);
  b = b.shifted(max_real(eigenvalues(b).values) + 1.0);
  ProblemConfig cfg;
  cfg.a = a;
  cfg.b = b;
  cfg.c = CMatrix::from_eigen(rng.complex_gauss(n, n));
  cfg.method = "heinz";
  cfg.tol = 1e-10;
  const double mra = min_real(eigenvalues(a).values);
  const double mrb = max_real(eigenvalues(b).values);
  require(mra > 0.0 && mrb < 0.0, fam, "min Re sigma(A) > 0 > max Re sigma(B)");
  cfg.stamp = {{"min_re_a", mra}, {"max_re_b", mrb}, {"spectral_gap", spectral_gap(a, b)}, {"verified", 1.0}};
  return cfg;
}

ProblemConfig jordan_nonnormal(std::size_t n, Rng& rng) {
  const std::string fam = "jordan-nonnormal";
  auto build = [&](double lambda) {
    Eigen::MatrixXd m = lambda * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k + 1 < m.rows(); ++k) m(k, k + 1) = rng.uniform(0.5, 1.0);
    return m;
  };
  const Eigen::MatrixXd a = build(1.0);
  const Eigen::MatrixXd b = build(-1.0);
  ProblemConfig cfg;
  cfg.a = from_real(a);
  cfg.b = from_real(b);
  cfg.c = from_real(rng.real_gauss(n, n));
  cfg.method = "sign-newton";
  cfg.tol = 1e-10;
  auto henrici = [&](const Eigen::MatrixXd& m, double lambda) {
    return std::sqrt(std::max(0.0, m.squaredNorm() - static_cast<double>(n) * lambda * lambda));
  };
  require(a.diagonal().minCoeff() == 1.0 && b.diagonal().maxCoeff() == -1.0, fam, "triangular spectra");
  cfg.stamp = {{"eig_a", 1.0},
               {"eig_b", -1.0},
               {"departure_a", henrici(a, 1.0)},
               {"departure_b", henrici(b, -1.0)},
               {"verified", 1.0}};
  return cfg;
}

ProblemConfig normal_disc(std::size_t n, Rng& rng) {
  const std::string fam = "normal-disc";
  const double offset = rng.uniform(0.0, 1.0);
  std::vector<cplx> d;
  for (std::size_t k = 0; k < n; ++k)
    d.push_back(std::polar(0.5, 2.0 * std::numbers::pi * (static_cast<double>(k) + offset) / static_cast<double>(n)));
  const EMatrix u = rng.unitary(n);
  const EMatrix a = u * Eigen::Map<const Eigen::VectorXcd>(d.data(), static_cast<Eigen::Index>(n)).asDiagonal() *
                    u.adjoint();
  const std::size_t nb = std::max<std::size_t>(1, n / 2);
  ProblemConfig cfg;
  cfg.a = CMatrix::from_eigen(a);
  cfg.b = 2.0 * CMatrix::identity(nb);
  cfg.c = CMatrix::from_eigen(rng.complex_gauss(n, nb));
  cfg.method = "disc-series";
  cfg.polynomial = PolySpec{std::nullopt, std::vector<cplx>{0.0, 1.0}, 1.0};
  cfg.max_degree = 8;
  cfg.tol = 1e-10;
  const double normality = (a * a.adjoint() - a.adjoint() * a).norm();
  const auto ea = eigenvalues(*cfg.a).values;
  double dev = 0.0;
  for (const auto& z : ea) dev = std::max(dev, std::abs(std::abs(z) - 0.5));
  require(normality < 1e-12 && dev < 1e-12, fam, "A normal with eigenvalues on |z| = 0.5");
  cfg.stamp = {{"radius_a", 0.5},
               {"eig_b", 2.0},
               {"eta", 0.25},
               {"normality_defect", normality},
               {"eig_modulus_defect", dev},
               {"verified", 1.0}};
  return cfg;
}

ProblemConfig agreement(std::size_t n, Rng& rng) {
  const std::string fam = "agreement";
  const std::size_t nb = even_size(n);
  const Eigen::MatrixXd pa = rng.real_gauss(n, n);
  const Eigen::MatrixXd a = 0.9 * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) +
                            0.03 * pa / pa.norm();
  Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  for (Eigen::Index k = 0; k + 1 < blk.rows(); k += 2) {
    const double w = 0.95 + rng.uniform(-0.02, 0.02);
    const double re = -0.1 + rng.uniform(-0.02, 0.02);
    blk(k, k) = re;
    blk(k + 1, k + 1) = re;
    blk(k, k + 1) = w;
    blk(k + 1, k) = -w;
  }
  const Eigen::MatrixXd qb = rng.orthogonal(nb);
  const Eigen::MatrixXd pb = rng.real_gauss(nb, nb);
  const Eigen::MatrixXd b = qb * blk * qb.transpose() + 0.02 * pb / pb.norm();
  ProblemConfig cfg;
  cfg.a = from_real(a);
  cfg.b = from_real(b);
  cfg.c = scaled_to(CMatrix::from_eigen(rng.complex_gauss(n, nb)), 0.05);
  cfg.method = "oracle";
  cfg.polynomial = PolySpec{std::vector<cplx>{1.0, -1.0, cplx(0, 1), cplx(0, -1)}, std::nullopt, 1.0};
  cfg.tol = 1e-10;
  const auto ea = eigenvalues(*cfg.a).values;
  const auto eb = eigenvalues(*cfg.b).values;
  const Poly p2 = Poly(std::vector<cplx>{-0.8, 0.0, 1.0});
  double rho_a = 0.0, min_b = std::numeric_limits<double>::infinity();
  for (const auto& z : ea) rho_a = std::max(rho_a, std::abs(p2(z)));
  for (const auto& z : eb) min_b = std::min(min_b, std::abs(p2(z)));
  double a2 = std::numeric_limits<double>::infinity(), b2 = -a2;
  for (const auto& z : ea) a2 = std::min(a2, (z * z).real());
  for (const auto& z : eb) b2 = std::max(b2, (z * z).real());
  require(min_real(ea) > 0.0 && max_real(eb) < 0.0, fam, "half-plane separation");
  require(rho_a / min_b < 1.0, fam, "disc separation for z^2 - 0.8");
  require(rho_m4(ea, eb) < 1.0 && a2 > 0.0 && b2 < 0.0, fam, "sign series over M^2");
  cfg.stamp = {{"min_re_a", min_real(ea)},
               {"max_re_b", max_real(eb)},
               {"disc_ratio_z2_minus_0.8", rho_a / min_b},
               {"rho_m4_minus_i", rho_m4(ea, eb)},
               {"min_re_a2", a2},
               {"max_re_b2", b2},
               {"verified", 1.0}};
  return cfg;
}

}  // namespace

const std::vector<std::string>& families() {
  static const std::vector<std::string> f{"symmetric-skew", "selfadjoint-pair", "shifted-random",
                                          "jordan-nonnormal", "normal-disc",    "agreement"};
  return f;
}

ProblemConfig generate(const std::string& family, std::size_t size, std::uint64_t seed) {
  if (size < 1 || size > 64) throw InvalidArgument("generate: size must be between 1 and 64");
  Rng rng(seed);
  ProblemConfig cfg;
  if (family == "symmetric-skew") cfg = symmetric_skew(size, rng);
  else if (family == "selfadjoint-pair") cfg = selfadjoint_pair(size, rng);
  else if (family == "shifted-random") cfg = shifted_random(size, rng);
  else if (family == "jordan-nonnormal") cfg = jordan_nonnormal(size, rng);
  else if (family == "normal-disc") cfg = normal_disc(size, rng);
  else if (family == "agreement") cfg = agreement(size, rng);
  else throw InvalidArgument("generate: unknown family '" + family + "'");
  cfg.family = family;
  cfg.size = size;
  cfg.seed = seed;
  return cfg;
}

}  // namespace polysep

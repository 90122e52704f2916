#include "polysep/bivarcalc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace polysep {

namespace {

std::vector<BivarTerm> combine(std::vector<BivarTerm> terms) {
  std::map<std::pair<int, int>, cplx> acc;
  for (const auto& t : terms) {
    if (t.i < 0 || t.j < 0) throw InvalidArgument("BivarPoly: negative exponent");
    acc[{t.i, t.j}] += t.coeff;
  }
  std::vector<BivarTerm> out;
  for (const auto& [ij, c] : acc)
    if (c != cplx(0.0)) out.push_back({ij.first, ij.second, c});
  return out;
}

std::vector<BivarTerm> expand_divided_difference(const Poly& p) {
  std::vector<BivarTerm> out;
  for (int j = 1; j <= p.degree(); ++j) {
    const cplx a = p.coeff(j);
    if (a == cplx(0.0)) continue;
    for (int i = 0; i < j; ++i) out.push_back({i, j - 1 - i, a});
  }
  return combine(std::move(out));
}

CMatrix matrix_power(const CMatrix& m, int k) {
  CMatrix r = CMatrix::identity(m.rows());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

void check_shapes(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
  if (!a.is_square() || !b.is_square())
    throw DimensionError("bivariate calculus: A and B must be square");
  if (c.rows() != a.rows() || c.cols() != b.rows())
    throw DimensionError("bivariate calculus: C must be rows(A) x rows(B)");
}

}  // namespace

BivarPoly BivarPoly::generic(std::vector<BivarTerm> terms) {
  BivarPoly f;
  f.terms_ = combine(std::move(terms));
  return f;
}

BivarPoly BivarPoly::divided_difference_of(Poly p) {
  BivarPoly f;
  f.source_ = std::move(p);
  return f;
}

BivarPoly BivarPoly::difference_of(const Poly& p) {
  std::vector<BivarTerm> t;
  for (int k = 1; k <= p.degree(); ++k) {
    t.push_back({k, 0, p.coeff(k)});
    t.push_back({0, k, -p.coeff(k)});
  }
  return generic(std::move(t));
}

const Poly& BivarPoly::source() const {
  if (!source_) throw InvalidArgument("BivarPoly: not in divided-difference form");
  return *source_;
}

std::vector<BivarTerm> BivarPoly::terms() const {
  return source_ ? expand_divided_difference(*source_) : terms_;
}

int BivarPoly::degree_lambda() const {
  if (source_) return std::max(source_->degree() - 1, 0);
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.i);
  return d;
}

int BivarPoly::degree_mu() const {
  if (source_) return std::max(source_->degree() - 1, 0);
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.j);
  return d;
}

cplx BivarPoly::operator()(cplx lambda, cplx mu) const {
  if (source_) {
    // Power-sum recursion q_k = lambda q_{k-1} + mu^k, exact also for lambda == mu.
    const Poly& p = *source_;
    cplx qk = 1.0, muk = 1.0, acc = p.coeff(1);
    for (int k = 1; k < p.degree(); ++k) {
      muk *= mu;
      qk = lambda * qk + muk;
      acc += p.coeff(k + 1) * qk;
    }
    return p.degree() >= 1 ? acc : cplx(0.0);
  }
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += t.coeff * std::pow(lambda, t.i) * std::pow(mu, t.j);
  return acc;
}

BivarPoly operator*(const BivarPoly& g, const BivarPoly& f) {
  const auto gt = g.terms();
  const auto ft = f.terms();
  std::vector<BivarTerm> out;
  out.reserve(gt.size() * ft.size());
  for (const auto& a : gt)
    for (const auto& b : ft) out.push_back({a.i + b.i, a.j + b.j, a.coeff * b.coeff});
  return BivarPoly::generic(std::move(out));
}

BivarPoly operator+(const BivarPoly& g, const BivarPoly& f) {
  auto t = g.terms();
  const auto ft = f.terms();
  t.insert(t.end(), ft.begin(), ft.end());
  return BivarPoly::generic(std::move(t));
}

BivarPoly divided_difference(const Poly& p) {
  if (p.degree() < 1) throw InvalidArgument("divided_difference: degree must be at least 1");
  return BivarPoly::divided_difference_of(p);
}

CMatrix apply(const BivarPoly& f, const CMatrix& a, const CMatrix& b, const CMatrix& c) {
  check_shapes(a, b, c);
  if (f.is_divided_difference()) {
    const Poly& p = f.source();
    CMatrix result = p.coeff(1) * c;
    CMatrix q = c;   // q_{k-1}(A,B)(C)
    CMatrix cb = c;  // C B^k
    for (int k = 1; k < p.degree(); ++k) {
      cb = cb * b;
      q = a * q + cb;
      result = result + p.coeff(k + 1) * q;
    }
    return result;
  }
  const auto terms = f.terms();
  CMatrix result = CMatrix::zeros(c.rows(), c.cols());
  if (terms.empty()) return result;
  int max_i = 0, max_j = 0;
  for (const auto& t : terms) {
    max_i = std::max(max_i, t.i);
    max_j = std::max(max_j, t.j);
  }
  std::vector<CMatrix> cb{c};
  for (int j = 1; j <= max_j; ++j) cb.push_back(cb.back() * b);
  // Horner in A over the grouped right factors: sum_i A^i (sum_j a_ij C B^j).
  std::vector<CMatrix> right(static_cast<std::size_t>(max_i) + 1,
                             CMatrix::zeros(c.rows(), c.cols()));
  for (const auto& t : terms) {
    auto& slot = right[static_cast<std::size_t>(t.i)];
    slot = slot + t.coeff * cb[static_cast<std::size_t>(t.j)];
  }
  result = right.back();
  for (int i = max_i - 1; i >= 0; --i) result = a * result + right[static_cast<std::size_t>(i)];
  return result;
}

double composition_check(const BivarPoly& g, const BivarPoly& f, const CMatrix& a,
                         const CMatrix& b, const CMatrix& c) {
  const CMatrix lhs = apply(g, a, b, apply(f, a, b, c));
  const CMatrix rhs = apply(g * f, a, b, c);
  return (lhs - rhs).frobenius_norm();
}

CMatrix block_triangular(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
  check_shapes(a, b, c);
  return CMatrix::blocks(a, c, CMatrix::zeros(b.rows(), a.cols()), b);
}

CMatrix block_poly_power(const Poly& p, const CMatrix& a, const CMatrix& b, const CMatrix& c,
                         int k) {
  check_shapes(a, b, c);
  if (k < 0) throw InvalidArgument("block_poly_power: exponent must be nonnegative");
  const CMatrix r = p(a);
  const CMatrix s = p(b);
  const CMatrix t = p.degree() >= 1 ? apply(divided_difference(p), a, b, c)
                                    : CMatrix::zeros(c.rows(), c.cols());
  const CMatrix tr = k >= 1 ? apply(divided_difference(Poly::monomial(k)), r, s, t)
                             : CMatrix::zeros(c.rows(), c.cols());
  return CMatrix::blocks(matrix_power(r, k), tr, CMatrix::zeros(b.rows(), a.cols()),
                         matrix_power(s, k));
}

BlockPowerLadder::BlockPowerLadder(CMatrix r, CMatrix s, CMatrix t)
    : r_(std::move(r)), s_(std::move(s)), t_(std::move(t)) {
  check_shapes(r_, s_, t_);
  rk_ = CMatrix::identity(r_.rows());
  sk_ = CMatrix::identity(s_.rows());
  tk_ = CMatrix::zeros(t_.rows(), t_.cols());
}

void BlockPowerLadder::advance() {
  tk_ = rk_ * t_ + tk_ * s_;
  rk_ = rk_ * r_;
  sk_ = sk_ * s_;
  ++k_;
}

CMatrix BlockPowerLadder::assembled() const {
  return CMatrix::blocks(rk_, tk_, CMatrix::zeros(sk_.rows(), rk_.cols()), sk_);
}

double op_norm_upper(const BivarPoly& f, double norm_a, double norm_b) {
  double u = 0.0;
  for (const auto& t : f.terms()) u += std::abs(t.coeff) * std::pow(norm_a, t.i) * std::pow(norm_b, t.j);
  return u;
}

NormEstimate op_norm_estimate(const BivarPoly& f, const CMatrix& a, const CMatrix& b, int probes,
                              std::uint64_t seed) {
  NormEstimate est;
  est.upper = op_norm_upper(f, op_norm(a), op_norm(b));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < probes; ++k) {
    std::vector<cplx> e(a.rows() * b.rows());
    for (auto& z : e) z = {g(rng), g(rng)};
    CMatrix c(a.rows(), b.rows(), e);
    const double n = op_norm(c);
    if (n == 0.0) continue;
    c = c / n;
    est.lower = std::max(est.lower, op_norm(apply(f, a, b, c)));
  }
  // Rounding in the probe must not invert the bracket.
  if (est.lower > est.upper && est.lower <= est.upper * (1.0 + 1e-12)) est.lower = est.upper;
  return est;
}

}  // namespace polysep

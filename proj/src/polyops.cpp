#include "polysep/polyops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace polysep {

namespace {

void trim(std::vector<cplx>& c) {
  while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double simple_root_tolerance(std::span<const cplx> roots) {
  double m = 0.0;
  for (const auto& r : roots) m = std::max(m, std::abs(r));
  return 1e-6 * (1.0 + m);
}

Poly::Poly(std::vector<cplx> ascending) : coeffs_(std::move(ascending)) {
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InvalidArgument("Poly: non-finite coefficient");
  }
  trim(coeffs_);
}

Poly Poly::constant(cplx c) { return Poly(std::vector<cplx>{c}); }

Poly Poly::monomial(int k, cplx c) {
  if (k < 0) throw InvalidArgument("Poly::monomial: negative degree");
  std::vector<cplx> v(static_cast<std::size_t>(k) + 1, 0.0);
  v.back() = c;
  return Poly(std::move(v));
}

Poly Poly::from_roots(std::span<const cplx> roots, cplx leading) {
  std::vector<cplx> c{leading};
  for (const auto& r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  Poly p(std::move(c));
  if (leading != cplx(0.0)) p.roots_ = std::vector<cplx>(roots.begin(), roots.end());
  return p;
}

cplx Poly::coeff(int k) const noexcept {
  if (k < 0 || k > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

cplx Poly::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

CMatrix Poly::operator()(const CMatrix& t) const {
  if (!t.is_square()) throw DimensionError("Poly: evaluation needs a square matrix");
  const std::size_t n = t.rows();
  if (coeffs_.empty()) return CMatrix::zeros(n, n);
  EMatrix acc = EMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) *
                coeffs_.back();
  for (int k = degree() - 1; k >= 0; --k) {
    acc = t.eigen() * acc;
    acc.diagonal().array() += coeffs_[static_cast<std::size_t>(k)];
  }
  return CMatrix::from_eigen(std::move(acc));
}

Poly Poly::derivative(int k) const {
  if (k < 0) throw InvalidArgument("Poly::derivative: negative order");
  std::vector<cplx> c = coeffs_;
  for (int step = 0; step < k && !c.empty(); ++step) {
    std::vector<cplx> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
    c = std::move(d);
  }
  return Poly(std::move(c));
}

Poly Poly::monic() const {
  if (is_zero()) throw InvalidArgument("Poly::monic: zero polynomial");
  const cplx lead = leading();
  std::vector<cplx> c = coeffs_;
  for (auto& x : c) x /= lead;
  c.back() = 1.0;
  Poly p(std::move(c));
  p.roots_ = roots_;
  return p;
}

Poly Poly::compose(const Poly& inner) const {
  Poly acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * inner + constant(*it);
  return acc;
}

std::vector<cplx> Poly::taylor_at(cplx z0) const {
  const int d = degree();
  std::vector<cplx> out(static_cast<std::size_t>(std::max(d + 1, 0)), 0.0);
  for (int k = 0; k <= d; ++k) {
    cplx s = 0.0;
    cplx zp = 1.0;
    for (int i = k; i <= d; ++i) {
      s += coeffs_[static_cast<std::size_t>(i)] * binomial(i, k) * zp;
      zp *= z0;
    }
    out[static_cast<std::size_t>(k)] = s;
  }
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + cplx(-1.0) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Poly(std::move(c));
}

Poly operator*(cplx s, const Poly& a) {
  std::vector<cplx> c = a.coeffs_;
  for (auto& x : c) x *= s;
  return Poly(std::move(c));
}

std::vector<cplx> roots(const Poly& p) {
  if (p.degree() < 1) throw InvalidArgument("roots: degree must be at least 1");
  if (p.known_roots()) return *p.known_roots();
  const int d = p.degree();
  const cplx lead = p.leading();
  // Companion matrix of the monic normalization: last column holds -a_k/a_d.
  CMatrix comp;
  {
    std::vector<cplx> entries(static_cast<std::size_t>(d * d), 0.0);
    for (int i = 1; i < d; ++i) entries[static_cast<std::size_t>(i * d + (i - 1))] = 1.0;
    for (int i = 0; i < d; ++i)
      entries[static_cast<std::size_t>(i * d + (d - 1))] = -p.coeff(i) / lead;
    comp = CMatrix(static_cast<std::size_t>(d), static_cast<std::size_t>(d), entries);
  }
  std::vector<cplx> r = eigenvalues(comp, "companion").values;
  const Poly dp = p.derivative();
  for (auto& z : r) {
    for (int it = 0; it < 2; ++it) {
      const cplx f = p(z);
      const cplx fp = dp(z);
      if (std::abs(fp) == 0.0) break;
      const cplx step = f / fp;
      const cplx candidate = z - step;
      if (std::abs(p(candidate)) <= std::abs(f)) z = candidate;
    }
  }
  double cmax = 0.0;
  for (const auto& c : p.coeffs()) cmax = std::max(cmax, std::abs(c / lead));
  for (const auto& z : r) {
    const double scale = 1.0 + cmax;
    const double zpow = std::pow(std::max(1.0, std::abs(z)), d);
    if (std::abs(p(z) / lead) > kTolRoot * scale * zpow) {
      throw NumericalError("roots: companion eigenvalue failed the residual check");
    }
  }
  return r;
}

double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b) {
  auto directed = [](std::span<const cplx> x, std::span<const cplx> y) {
    double h = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, std::abs(p - q));
      h = std::max(h, best);
    }
    return h;
  };
  return std::max(directed(a, b), directed(b, a));
}

LagrangeBasis lagrange_basis(std::span<const cplx> roots) {
  if (roots.empty()) throw InvalidArgument("lagrange_basis: no nodes");
  const double sep = simple_root_tolerance(roots);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) <= sep) {
        std::ostringstream os;
        os << "lagrange_basis: nodes " << i << " " << roots[i] << " and " << j << " " << roots[j]
           << " are closer than " << sep;
        throw ConditioningError(os.str());
      }
    }
  }
  LagrangeBasis lb;
  lb.roots.assign(roots.begin(), roots.end());
  for (std::size_t j = 0; j < roots.size(); ++j) {
    std::vector<cplx> others;
    cplx denom = 1.0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      if (k == j) continue;
      others.push_back(roots[k]);
      denom *= roots[j] - roots[k];
    }
    lb.basis.push_back(Poly::from_roots(others, 1.0 / denom));
  }
  return lb;
}

std::vector<cplx> leja_points(std::span<const cplx> candidates, std::size_t count) {
  std::vector<cplx> pool(candidates.begin(), candidates.end());
  std::vector<cplx> chosen;
  if (pool.empty() || count == 0) return chosen;
  count = std::min(count, pool.size());
  std::size_t first = 0;
  for (std::size_t i = 1; i < pool.size(); ++i)
    if (std::abs(pool[i]) > std::abs(pool[first])) first = i;
  chosen.push_back(pool[first]);
  pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(first));
  while (chosen.size() < count) {
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      // Sum of logs avoids under/overflow for long sequences.
      double v = 0.0;
      for (const auto& c : chosen) v += std::log(std::abs(pool[i] - c) + 1e-300);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    chosen.push_back(pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return chosen;
}

}  // namespace polysep

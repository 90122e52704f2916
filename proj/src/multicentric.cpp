#include "polysep/multicentric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>

#include <boost/multiprecision/mpfr.hpp>

#include "polysep/detail/taylor_recursion.hpp"

namespace polysep {

namespace bmp = boost::multiprecision;

namespace {

using MpReal = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

using Table = std::vector<std::vector<cplx>>;

template <class S, class FromCplx, class ToCplx>
Table run_recursion(std::span<const cplx> roots, cplx leading, const PhiGerm& germ, int order,
                    FromCplx from, ToCplx to) {
  std::vector<S> r;
  for (const auto& z : roots) r.push_back(from(z));
  std::vector<std::vector<S>> g(roots.size());
  for (std::size_t j = 0; j < roots.size(); ++j) {
    S fact(1);
    for (int n = 0; n <= order; ++n) {
      if (n > 0) fact = fact * S(n);
      g[j].push_back(from(germ.derivatives[j][static_cast<std::size_t>(n)]) / fact);
    }
  }
  const auto a = detail::taylor_recursion(r, from(leading), g, order);
  Table out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (const auto& v : a[j]) out[j].push_back(to(v));
  return out;
}

Table run_double(std::span<const cplx> roots, cplx leading, const PhiGerm& germ, int order) {
  auto id = [](const cplx& z) { return z; };
  return run_recursion<cplx>(roots, leading, germ, order, id, id);
}

Table run_mp(unsigned digits, std::span<const cplx> roots, cplx leading, const PhiGerm& germ,
             int order) {
  using S = detail::Cx<MpReal>;
  const unsigned saved = MpReal::default_precision();
  MpReal::default_precision(digits);
  auto from = [](const cplx& z) { return S(MpReal(z.real()), MpReal(z.imag())); };
  auto to = [](const S& z) { return cplx(static_cast<double>(z.re), static_cast<double>(z.im)); };
  Table out;
  try {
    out = run_recursion<S>(roots, leading, germ, order, from, to);
  } catch (...) {
    MpReal::default_precision(saved);
    throw;
  }
  MpReal::default_precision(saved);
  return out;
}

/// Worst ratio |hi - lo| / (|hi| + envelope) per order.
std::vector<double> discrepancy(const Table& lo, const Table& hi, const TaylorOptions& opts) {
  double base = 1.0;
  for (const auto& row : hi)
    if (!row.empty()) base = std::max(base, std::abs(row.front()));
  const double radius = opts.envelope_radius > 0.0 ? opts.envelope_radius : 1.0;
  std::vector<double> e(hi.empty() ? 0 : hi.front().size(), 0.0);
  for (std::size_t j = 0; j < hi.size(); ++j) {
    for (std::size_t n = 0; n < hi[j].size(); ++n) {
      const double env = base * std::pow(radius, -static_cast<double>(n));
      const double diff = std::abs(hi[j][n] - lo[j][n]);
      const double rel = diff / (std::abs(hi[j][n]) + env);
      e[n] = std::isfinite(rel) ? std::max(e[n], rel) : std::numeric_limits<double>::infinity();
    }
  }
  return e;
}

bool tables_agree(const Table& lo, const Table& hi, const TaylorOptions& opts) {
  for (double e : discrepancy(lo, hi, opts))
    if (!(e <= opts.agreement)) return false;
  return true;
}

bool all_finite(const Table& t) {
  for (const auto& row : t)
    for (const auto& v : row)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

// Coefficients depend only on p and the germ, so repeated solves with the same
// polynomial reuse them. An entry verified at order N1 and envelope radius R1
// also satisfies every request with N <= N1 and R <= R1.
struct CacheEntry {
  std::vector<cplx> roots;
  cplx leading;
  PhiGerm germ;
  TaylorOptions opts;
  MulticentricSeries series;
};

std::mutex cache_mutex;
std::vector<CacheEntry> cache;
constexpr std::size_t kCacheSize = 16;

bool germ_prefix_equal(const PhiGerm& a, const PhiGerm& b, int order) {
  if (a.roots() != b.roots()) return false;
  for (std::size_t j = 0; j < a.roots(); ++j)
    for (std::size_t n = 0; n <= static_cast<std::size_t>(order); ++n)
      if (a.derivatives[j][n] != b.derivatives[j][n]) return false;
  return true;
}

std::optional<MulticentricSeries> cache_lookup(const std::vector<cplx>& rts, cplx lead,
                                               const PhiGerm& germ, int order,
                                               const TaylorOptions& opts) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  for (const auto& e : cache) {
    if (e.roots != rts || e.leading != lead || e.series.order() < order) continue;
    if (e.opts.agreement > opts.agreement) continue;
    if (opts.envelope_radius > e.opts.envelope_radius) continue;
    if (!germ_prefix_equal(e.germ, germ, order)) continue;
    MulticentricSeries s = e.series;
    for (auto& row : s.alpha) row.resize(static_cast<std::size_t>(order) + 1);
    return s;
  }
  return std::nullopt;
}

void cache_store(const std::vector<cplx>& rts, cplx lead, const PhiGerm& germ,
                 const TaylorOptions& opts, const MulticentricSeries& s) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  if (cache.size() >= kCacheSize) cache.erase(cache.begin());
  cache.push_back({rts, lead, germ, opts, s});
}

MulticentricSeries adaptive_coeffs(const std::vector<cplx>& rts, cplx lead, const PhiGerm& germ,
                                   int order, const TaylorOptions& opts);

}  // namespace

BnmTable BnmTable::build(const Poly& p, int order) {
  if (order < 0) throw InvalidArgument("bnm_table: order must be non-negative");
  BnmTable t;
  t.p_ = p;
  t.order_ = order;
  const Poly dp = p.derivative();
  t.b_.resize(static_cast<std::size_t>(order) + 1);
  t.b_[0].push_back(Poly::constant(1.0));
  for (int n = 0; n < order; ++n) {
    const auto& prev = t.b_[static_cast<std::size_t>(n)];
    auto& next = t.b_[static_cast<std::size_t>(n) + 1];
    next.resize(static_cast<std::size_t>(n) + 2);
    for (int m = 1; m <= n + 1; ++m) {
      Poly v = prev[static_cast<std::size_t>(m - 1)] * dp;
      if (m <= n) v = v + prev[static_cast<std::size_t>(m)].derivative();
      next[static_cast<std::size_t>(m)] = std::move(v);
    }
  }
  return t;
}

const Poly& BnmTable::at(int n, int m) const {
  if (n < 0 || n > order_) throw InvalidArgument("BnmTable::at: n out of range");
  if (m < 0 || m > n) return zero_;
  return b_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
}

BnmTable bnm_table(const Poly& p, int order) { return BnmTable::build(p, order); }

void PhiGerm::validate() const {
  if (derivatives.empty()) throw InvalidArgument("PhiGerm: empty table");
  const std::size_t w = derivatives.front().size();
  if (w == 0) throw InvalidArgument("PhiGerm: no orders");
  for (const auto& row : derivatives) {
    if (row.size() != w) throw InvalidArgument("PhiGerm: table is not rectangular");
    for (const auto& v : row)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw InvalidArgument("PhiGerm: non-finite entry");
  }
}

PhiGerm phi_germ_piecewise_constant(std::span<const int> signs, int order) {
  if (order < 0) throw InvalidArgument("phi_germ: order must be non-negative");
  PhiGerm g;
  for (int s : signs) {
    if (s != 1 && s != -1) throw InvalidArgument("phi_germ: assignment must be +1 or -1");
    std::vector<cplx> row(static_cast<std::size_t>(order) + 1, 0.0);
    row[0] = static_cast<double>(s);
    g.derivatives.push_back(std::move(row));
  }
  return g;
}

PhiGerm phi_germ_shift(std::span<const cplx> roots, std::span<const int> signs, double c,
                       int order) {
  if (order < 0) throw InvalidArgument("phi_germ: order must be non-negative");
  if (roots.size() != signs.size()) throw InvalidArgument("phi_germ: every root needs a sign");
  if (!(c > 0.0)) throw InvalidArgument("phi_germ_shift: c must be positive");
  PhiGerm g;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (signs[j] != 1 && signs[j] != -1)
      throw InvalidArgument("phi_germ: assignment must be +1 or -1");
    std::vector<cplx> row(static_cast<std::size_t>(order) + 1, 0.0);
    row[0] = roots[j] + static_cast<double>(signs[j]) * c;
    if (order >= 1) row[1] = 1.0;
    g.derivatives.push_back(std::move(row));
  }
  return g;
}

PhiGerm phi_germ_polynomial(const Poly& phi, std::span<const cplx> roots, int order) {
  if (order < 0) throw InvalidArgument("phi_germ: order must be non-negative");
  PhiGerm g;
  for (const auto& r : roots) {
    std::vector<cplx> row;
    Poly d = phi;
    for (int n = 0; n <= order; ++n) {
      row.push_back(d(r));
      d = d.derivative();
    }
    g.derivatives.push_back(std::move(row));
  }
  return g;
}

MulticentricSeries taylor_coeffs(const Poly& p, const PhiGerm& germ, int order,
                                 const TaylorOptions& opts) {
  if (order < 0) throw InvalidArgument("taylor_coeffs: order must be non-negative");
  if (p.degree() < 1) throw InvalidArgument("taylor_coeffs: p must have degree at least 1");
  germ.validate();
  const std::vector<cplx> rts = roots(p);
  if (germ.roots() != rts.size())
    throw InvalidArgument("taylor_coeffs: germ rows must match the roots of p");
  if (germ.order() < order) throw InvalidArgument("taylor_coeffs: germ table is too short");

  // Simple roots: nodes separated and p' bounded away from zero.
  lagrange_basis(rts);
  const Poly dp = p.derivative();
  const double sep = simple_root_tolerance(rts);
  for (std::size_t j = 0; j < rts.size(); ++j) {
    if (std::abs(dp(rts[j])) <= sep * std::abs(p.leading())) {
      std::ostringstream os;
      os << "taylor_coeffs: |p'(" << rts[j] << ")| is below the simple-root tolerance";
      throw ConditioningError(os.str());
    }
  }

  const cplx lead = p.leading();
  if (opts.arithmetic == Arithmetic::Double || order <= 1) {
    MulticentricSeries s;
    s.roots = rts;
    s.alpha = run_double(rts, lead, germ, order);
    if (!all_finite(s.alpha)) throw NumericalError("taylor_coeffs: non-finite coefficient");
    return s;
  }
  if (auto hit = cache_lookup(rts, lead, germ, order, opts)) return *hit;
  MulticentricSeries s = adaptive_coeffs(rts, lead, germ, order, opts);
  cache_store(rts, lead, germ, opts, s);
  return s;
}

namespace {

MulticentricSeries adaptive_coeffs(const std::vector<cplx>& rts, cplx lead, const PhiGerm& germ,
                                   int order, const TaylorOptions& opts) {
  MulticentricSeries s;
  s.roots = rts;
  // Probe how fast double-precision error grows with the order, then jump to
  // a precision that should carry the full order and confirm it against a
  // run with extra digits.
  constexpr int kProbeOrder = 64;
  constexpr unsigned kProbeDigits = 60;
  const int probe = std::min(order, kProbeOrder);
  PhiGerm probe_germ = germ;
  for (auto& row : probe_germ.derivatives) row.resize(static_cast<std::size_t>(probe) + 1);
  Table probe_lo = run_double(rts, lead, probe_germ, probe);
  Table probe_hi = run_mp(kProbeDigits, rts, lead, probe_germ, probe);
  if (order <= kProbeOrder && tables_agree(probe_lo, probe_hi, opts)) {
    s.alpha = std::move(probe_hi);
    s.digits = static_cast<int>(kProbeDigits);
    return s;
  }
  // Least-squares fit of the decimal digits lost against the order, over the
  // orders where double precision still carries information.
  const auto e = discrepancy(probe_lo, probe_hi, opts);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, cnt = 0.0;
  for (std::size_t n = 4; n < e.size(); ++n) {
    if (!(e[n] < 1e-3)) break;
    const double x = static_cast<double>(n);
    const double y = std::log10(std::max(e[n], 1e-17) / 1e-16);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1.0;
  }
  double lost = static_cast<double>(order);  // one digit per order if the fit is impossible
  if (cnt >= 4.0) {
    const double slope = std::max(0.0, (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx));
    const double icept = (sy - slope * sx) / cnt;
    lost = std::max(0.0, icept + slope * order);
  }
  unsigned digits = std::max(kProbeDigits, static_cast<unsigned>(std::ceil(30.0 + lost)));
  for (int attempt = 0; attempt < 4 && digits <= 4000; ++attempt) {
    const unsigned check = digits + std::max(20u, digits / 8);
    Table lo = run_mp(digits, rts, lead, germ, order);
    Table hi = run_mp(check, rts, lead, germ, order);
    if (all_finite(hi) && tables_agree(lo, hi, opts)) {
      s.alpha = std::move(hi);
      s.digits = static_cast<int>(check);
      return s;
    }
    digits = check * 2;
  }
  std::ostringstream os;
  os << "taylor_coeffs: coefficients did not stabilize up to " << digits << " digits";
  throw NumericalError(os.str());
}

}  // namespace

SeriesValue series_eval_matrix(const MulticentricSeries& s, const Poly& p, const CMatrix& t,
                               int order) {
  if (!t.is_square()) throw DimensionError("series_eval_matrix: square matrix required");
  if (order < 0 || order > s.order())
    throw InvalidArgument("series_eval_matrix: order exceeds the series");
  const std::size_t n = t.rows();
  const CMatrix pt = p(t);
  SeriesValue out;
  out.ratio = s.radius > 0.0 ? op_norm(pt) / s.radius : std::nan("");
  out.divergence_warning = s.radius > 0.0 && !(out.ratio < 1.0);

  const std::size_t d = s.roots.size();
  std::vector<CMatrix> branch(d, CMatrix::zeros(n, n));
  CMatrix power = CMatrix::identity(n);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) power = power * pt;
    for (std::size_t j = 0; j < d; ++j)
      branch[j] = branch[j] + s.alpha[j][static_cast<std::size_t>(k)] * power;
  }
  const LagrangeBasis lb = lagrange_basis(s.roots);
  CMatrix value = CMatrix::zeros(n, n);
  for (std::size_t j = 0; j < d; ++j) value = value + lb.basis[j](t) * branch[j];
  out.value = std::move(value);
  return out;
}

cplx series_eval_scalar(const MulticentricSeries& s, const Poly& p, cplx z, int order) {
  if (order < 0 || order > s.order())
    throw InvalidArgument("series_eval_scalar: order exceeds the series");
  const LagrangeBasis lb = lagrange_basis(s.roots);
  const cplx w = p(z);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < s.roots.size(); ++j) {
    cplx f = 0.0;
    for (int k = order; k >= 0; --k) f = f * w + s.alpha[j][static_cast<std::size_t>(k)];
    acc += lb.basis[j](z) * f;
  }
  return acc;
}

std::vector<cplx> circle_nodes(const Circle& c, std::size_t count) {
  std::vector<cplx> z(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    z[k] = c.center + c.radius * cplx(std::cos(th), std::sin(th));
  }
  return z;
}

std::vector<double> decay_constants(const Poly& p, double level, std::span<const cplx> roots,
                                    const CircleSet& contour) {
  if (contour.empty()) throw InvalidArgument("decay_constants: empty contour");
  for (const auto& c : contour)
    if (!(c.radius > 0.0)) throw InvalidArgument("decay_constants: circle radius must be positive");

  auto integrate = [&](std::size_t count, bool verify) {
    std::vector<double> l(roots.size(), 0.0);
    for (const auto& c : contour) {
      const auto nodes = circle_nodes(c, count);
      for (const auto& z : nodes) {
        if (verify && !(std::abs(p(z)) > level)) {
          std::ostringstream os;
          os << "decay_constants: |p| <= level at contour node " << z;
          throw CertificateError(os.str());
        }
        for (std::size_t j = 0; j < roots.size(); ++j)
          l[j] += c.radius / (static_cast<double>(count) * std::abs(z - roots[j]));
      }
    }
    return l;
  };

  std::size_t count = 64;
  std::vector<double> cur = integrate(count, true);
  for (int iter = 0; iter < 14; ++iter) {
    count *= 2;
    std::vector<double> next = integrate(count, true);
    double change = 0.0;
    for (std::size_t j = 0; j < cur.size(); ++j)
      change = std::max(change, std::abs(next[j] - cur[j]) / std::max(next[j], 1e-300));
    cur = std::move(next);
    if (change < 1e-8) return cur;
  }
  throw NumericalError("decay_constants: quadrature did not settle", 14);
}

void attach_decay(MulticentricSeries& s, double radius, std::vector<double> decay) {
  if (!(radius > 0.0)) throw InvalidArgument("attach_decay: radius must be positive");
  if (decay.size() != s.roots.size()) throw InvalidArgument("attach_decay: one L per root");
  s.radius = radius;
  s.decay = std::move(decay);
}

int truncation_order(double r, double prefactor, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("truncation_order: tol must be positive");
  if (!(r >= 0.0)) throw InvalidArgument("truncation_order: ratio must be non-negative");
  if (!(r < 1.0)) throw DivergenceError("truncation_order: ratio >= 1, no finite order");
  if (prefactor <= 0.0 || r == 0.0) return 0;
  const double rhs = 2.0 * (1.0 - r) * tol / prefactor;
  int n = 0;
  if (rhs < 1.0) n = std::max(0, static_cast<int>(std::floor(std::log(rhs) / std::log(r))) - 2);
  while (!(std::pow(r, n + 1) < rhs)) ++n;
  return n;
}

double truncation_bound(double r, double prefactor, int order) {
  if (!(r < 1.0)) throw DivergenceError("truncation_bound: ratio >= 1");
  return prefactor * std::pow(r, order + 1) / (1.0 - r);
}

Poly assemble_poly(const MulticentricSeries& s, const Poly& p, int order) {
  if (order < 0 || order > s.order())
    throw InvalidArgument("assemble_poly: order exceeds the series");
  const LagrangeBasis lb = lagrange_basis(s.roots);
  Poly out;
  for (std::size_t j = 0; j < s.roots.size(); ++j) {
    std::vector<cplx> c(s.alpha[j].begin(), s.alpha[j].begin() + order + 1);
    out = out + lb.basis[j] * Poly(std::move(c)).compose(p);
  }
  return out;
}

Poly build_halfplane_poly(const Poly& p, std::span<const int> signs, double c, int order,
                          const TaylorOptions& opts) {
  const auto rts = roots(p);
  const PhiGerm g = phi_germ_shift(rts, signs, c, order);
  return assemble_poly(taylor_coeffs(p, g, order, opts), p, order);
}

HalfplaneOrder halfplane_order(const Poly& p, std::span<const int> signs, double c,
                               const CMatrix& a, const CMatrix& b, double radius,
                               const CircleSet& contour, double target) {
  if (!(radius > 0.0)) throw InvalidArgument("halfplane_order: radius must be positive");
  const auto rts = roots(p);
  if (signs.size() != rts.size()) throw InvalidArgument("halfplane_order: every root needs a sign");
  HalfplaneOrder h;
  h.r = op_norm(p(a)) / radius;
  h.s = op_norm(p(b)) / radius;
  if (!(h.r < 1.0) || !(h.s < 1.0))
    throw DivergenceError("halfplane_order: decay ratio >= 1, no finite order");
  const auto l = decay_constants(p, radius, rts, contour);
  // sup of |z +- c| over the contour bounds |phi| on it.
  for (const auto& circ : contour) h.phi_sup = std::max(h.phi_sup, std::abs(circ.center) + circ.radius + c);
  const LagrangeBasis lb = lagrange_basis(rts);
  for (std::size_t j = 0; j < rts.size(); ++j) {
    h.prefactor_a += l[j] * op_norm(lb.basis[j](a));
    h.prefactor_b += l[j] * op_norm(lb.basis[j](b));
  }
  h.prefactor_a *= h.phi_sup;
  h.prefactor_b *= h.phi_sup;
  // truncation_order targets C r^{N+1}/(1-r) < 2 tol; pass target/2 for a bound below target.
  h.order = std::max(truncation_order(h.r, h.prefactor_a, 0.5 * target),
                     truncation_order(h.s, h.prefactor_b, 0.5 * target));
  return h;
}

}  // namespace polysep

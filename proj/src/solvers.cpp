#include "polysep/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "polysep/bivarcalc.hpp"
#include "polysep/kernels.hpp"
#include "polysep/multicentric_exact.hpp"

namespace polysep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Spectra {
  std::vector<cplx> a;
  std::vector<cplx> b;
};

Spectra spectra(const SylvesterProblem& prob) {
  return {eigenvalues(prob.a, "A").values, eigenvalues(prob.b, "B").values};
}

SolveReport finish(const SylvesterProblem& prob, Method m, CMatrix x) {
  SolveReport r;
  r.method = m;
  r.residual = relative_residual(prob.a, prob.b, prob.c, x);
  r.x = std::move(x);
  return r;
}

double real_shift(const SylvesterProblem& prob, const Spectra& s, const char* who) {
  double min_a = kInf, max_b = -kInf;
  for (const auto& z : s.a) min_a = std::min(min_a, z.real());
  for (const auto& z : s.b) max_b = std::max(max_b, z.real());
  if (!(min_a > max_b)) {
    std::ostringstream os;
    os << who << ": spectra are not separated by a vertical line (min Re sigma(A) = " << min_a
       << ", max Re sigma(B) = " << max_b << ")";
    throw ApplicabilityError(os.str());
  }
  const double shift = prob.shift ? *prob.shift : 0.5 * (min_a + max_b);
  if (!(min_a - shift > 0.0) || !(max_b - shift < 0.0)) {
    std::ostringstream os;
    os << who << ": shift " << shift << " does not separate the spectra";
    throw ApplicabilityError(os.str());
  }
  return shift;
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

struct Block {
  CMatrix tl, tr, br;
};

Block block_mul(const Block& x, const Block& y) {
  return {x.tl * y.tl, x.tl * y.tr + x.tr * y.br, x.br * y.br};
}

Block block_of(const Poly& f, const CMatrix& a, const CMatrix& b, const CMatrix& c) {
  CMatrix tr = f.degree() >= 1 ? apply(divided_difference(f), a, b, c)
                               : CMatrix::zeros(c.rows(), c.cols());
  return {f(a), std::move(tr), f(b)};
}

CMatrix assemble(const Block& x) {
  return CMatrix::blocks(x.tl, x.tr, CMatrix::zeros(x.br.rows(), x.tl.cols()), x.br);
}

std::string describe(const SeparationCertificate& cert) {
  std::ostringstream os;
  os << "kind=" << to_string(cert.kind) << " status=" << to_string(cert.status)
     << " level=" << cert.level << " margin=" << cert.margin << " score=" << cert.score
     << " components=" << cert.region.components;
  if (!cert.cause.empty()) os << " cause=\"" << cert.cause << "\"";
  return os.str();
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Oracle: return "oracle";
    case Method::Rosenblum: return "rosenblum";
    case Method::DiscSeries: return "disc-series";
    case Method::Heinz: return "heinz";
    case Method::SignNewton: return "sign-newton";
    case Method::Multicentric: return "multicentric";
    case Method::SignSeriesM2: return "sign-series-m2";
  }
  return "oracle";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> m{Method::Oracle,     Method::Rosenblum,    Method::DiscSeries,
                                     Method::Heinz,      Method::SignNewton,   Method::Multicentric,
                                     Method::SignSeriesM2};
  return m;
}

Method method_from_string(const std::string& name) {
  for (Method m : all_methods())
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown method '" + name + "'");
}

void SylvesterProblem::validate() const {
  if (a.empty() || b.empty()) throw DimensionError("problem: A and B must be non-empty");
  if (!a.is_square() || !b.is_square()) throw DimensionError("problem: A and B must be square");
  if (c.rows() != a.rows() || c.cols() != b.rows())
    throw DimensionError("problem: C must be rows(A) x rows(B)");
  if (!(tol > 0.0)) throw InvalidArgument("problem: tol must be positive");
  if (order && *order < 0) throw InvalidArgument("problem: order must be non-negative");
  if (margin && !(*margin > 0.0)) throw InvalidArgument("problem: margin must be positive");
}

double relative_residual(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& x) {
  const double r = (a * x - x * b - c).frobenius_norm();
  const double nc = c.frobenius_norm();
  return nc > 0.0 ? r / nc : r;
}

double spectral_gap(const CMatrix& a, const CMatrix& b) {
  const auto ea = eigenvalues(a, "A").values;
  const auto eb = eigenvalues(b, "B").values;
  double gap = kInf;
  for (const auto& x : ea)
    for (const auto& y : eb) gap = std::min(gap, std::abs(x - y));
  return gap;
}

SolveReport solve(const SylvesterProblem& prob) {
  switch (prob.method) {
    case Method::Oracle: return solve_oracle(prob);
    case Method::Rosenblum: return solve_rosenblum(prob);
    case Method::DiscSeries: return solve_disc_series(prob);
    case Method::Heinz: return solve_heinz(prob);
    case Method::SignNewton: return solve_sign_newton(prob);
    case Method::Multicentric: return solve_multicentric(prob);
    case Method::SignSeriesM2: return solve_sign_series_m2(prob);
  }
  throw InvalidArgument("solve: unknown method");
}

SolveReport solve_oracle(const SylvesterProblem& prob) {
  prob.validate();
  const Spectra s = spectra(prob);
  double gap = kInf;
  cplx worst_a, worst_b;
  for (const auto& x : s.a)
    for (const auto& y : s.b)
      if (std::abs(x - y) < gap) {
        gap = std::abs(x - y);
        worst_a = x;
        worst_b = y;
      }
  const double scale = 1.0 + op_norm(prob.a) + op_norm(prob.b);
  if (gap <= prob.tol * scale) {
    std::ostringstream os;
    os << "oracle: spectra overlap, eigenvalue " << worst_a << " of A and " << worst_b
       << " of B are " << gap << " apart";
    throw SpectralOverlapError(os.str());
  }
  const std::size_t m = prob.a.rows(), n = prob.b.rows();
  // Column-major vec: (I_n (x) A - B^T (x) I_m) vec(X) = vec(C).
  const CMatrix k = kron(CMatrix::identity(n), prob.a) - kron(prob.b.transpose(), CMatrix::identity(m));
  EMatrix vc = Eigen::Map<const EMatrix>(prob.c.eigen().data(), static_cast<Eigen::Index>(m * n), 1);
  CMatrix rhs = CMatrix::from_eigen(vc);
  CMatrix v = solve_linear(k, rhs);
  // One step of iterative refinement.
  v = v + solve_linear(k, rhs - k * v);
  EMatrix xe = Eigen::Map<const EMatrix>(v.eigen().data(), static_cast<Eigen::Index>(m),
                                         static_cast<Eigen::Index>(n));
  SolveReport r = finish(prob, Method::Oracle, CMatrix::from_eigen(std::move(xe)));
  r.diagnostics["spectral_gap"] = gap;
  return r;
}

CircleSet rosenblum_contour(const CMatrix& a, const CMatrix& b) {
  const auto ea = eigenvalues(a, "A").values;
  const auto eb = eigenvalues(b, "B").values;
  double scale = 1.0;
  for (const auto& z : ea) scale = std::max(scale, 1.0 + std::abs(z));
  for (const auto& z : eb) scale = std::max(scale, 1.0 + std::abs(z));
  const double guard = 1e-9 * scale;
  for (double factor : {0.4, 0.2, 0.1}) {
    CircleSet circles;
    bool ok = true;
    for (const auto& x : ea) {
      double d = kInf;
      for (const auto& y : eb) d = std::min(d, std::abs(x - y));
      if (!(d > 1e3 * guard)) throw CertificateError("rosenblum: spectra of A and B overlap");
      circles.push_back({x, factor * d});
    }
    bool merged = true;
    while (merged) {
      merged = false;
      for (std::size_t i = 0; i < circles.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < circles.size() && !merged; ++j) {
          const Circle ci = circles[i], cj = circles[j];
          const double d = std::abs(cj.center - ci.center);
          if (d >= ci.radius + cj.radius) continue;
          Circle m;
          if (d + cj.radius <= ci.radius) {
            m = ci;
          } else if (d + ci.radius <= cj.radius) {
            m = cj;
          } else {
            m.radius = 0.5 * (d + ci.radius + cj.radius);
            m.center = ci.center + (cj.center - ci.center) / d * (m.radius - ci.radius);
          }
          circles[i] = m;
          circles.erase(circles.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
    }
    for (const auto& c : circles) {
      for (const auto& y : eb)
        if (!(std::abs(y - c.center) > c.radius + guard)) ok = false;
      for (const auto& x : ea)
        if (std::abs(std::abs(x - c.center) - c.radius) <= guard) ok = false;
    }
    if (ok) return circles;
  }
  throw CertificateError("rosenblum: no circle set separates sigma(A) from sigma(B)");
}

SolveReport solve_rosenblum(const SylvesterProblem& prob) {
  prob.validate();
  const Spectra s = spectra(prob);
  const CircleSet contour = prob.contour ? *prob.contour : rosenblum_contour(prob.a, prob.b);
  if (contour.empty()) throw CertificateError("rosenblum: empty contour");
  // Winding 1 around every eigenvalue of A, 0 around every eigenvalue of B.
  for (const auto& c : contour)
    if (!(c.radius > 0.0)) throw CertificateError("rosenblum: circle radius must be positive");
  for (std::size_t i = 0; i < contour.size(); ++i)
    for (std::size_t j = i + 1; j < contour.size(); ++j)
      if (std::abs(contour[i].center - contour[j].center) <= contour[i].radius + contour[j].radius)
        throw CertificateError("rosenblum: contour circles intersect");
  for (const auto& x : s.a) {
    int wind = 0;
    for (const auto& c : contour) wind += std::abs(x - c.center) < c.radius ? 1 : 0;
    if (wind != 1) throw CertificateError("rosenblum: contour does not enclose every eigenvalue of A");
  }
  for (const auto& y : s.b)
    for (const auto& c : contour)
      if (std::abs(y - c.center) <= c.radius)
        throw CertificateError("rosenblum: contour encloses an eigenvalue of B");

  // Trapezoid on each circle; doubling reuses the previous nodes.
  auto partial = [&](std::size_t count, bool odd_only) {
    EMatrix acc = EMatrix::Zero(static_cast<Eigen::Index>(prob.c.rows()),
                                static_cast<Eigen::Index>(prob.c.cols()));
    for (const auto& c : contour) {
      std::vector<cplx> nodes, weights;
      for (std::size_t k = odd_only ? 1 : 0; k < count; k += odd_only ? 2 : 1) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
        const cplx u(std::cos(th), std::sin(th));
        nodes.push_back(c.center + c.radius * u);
        weights.push_back(c.radius * u / static_cast<double>(count));
      }
      acc += kernels::resolvent_sandwich(prob.a, prob.b, prob.c, nodes, weights);
    }
    return acc;
  };
  std::size_t count = 32;
  EMatrix x = partial(count, false);
  int rounds = 0;
  while (true) {
    if (count * 2 > prob.limits.max_nodes)
      throw NumericalError("rosenblum: quadrature did not converge within the node limit", rounds);
    count *= 2;
    ++rounds;
    EMatrix next = 0.5 * x + partial(count, true);
    const double change = (next - x).norm();
    x = std::move(next);
    if (change <= prob.tol * x.norm()) break;
  }
  SolveReport r = finish(prob, Method::Rosenblum, CMatrix::from_eigen(std::move(x)));
  r.order = static_cast<int>(count);
  r.iterations = rounds;
  r.diagnostics["circles"] = static_cast<double>(contour.size());
  std::ostringstream os;
  os << "contour circles=" << contour.size();
  r.certificate = os.str();
  return r;
}

CMatrix disc_series_partial(const CMatrix& r, const CMatrix& s_inv, const CMatrix& c, int order) {
  CMatrix y = CMatrix::zeros(c.rows(), c.cols());
  CMatrix term = c * s_inv;
  for (int n = 0; n <= order; ++n) {
    y = y - term;
    if (n < order) term = r * term * s_inv;
  }
  return y;
}

namespace {

struct SeriesOutcome {
  CMatrix y;
  int order = 0;
  double ratio = 0.0;
};

SeriesOutcome disc_series_adaptive(const CMatrix& r, const CMatrix& s_inv, const CMatrix& c,
                                   double tol, int max_terms) {
  SeriesOutcome out;
  out.y = CMatrix::zeros(c.rows(), c.cols());
  CMatrix term = c * s_inv;
  double prev = -1.0;
  int growing = 0;
  std::vector<double> ratios;
  for (int n = 0; n <= max_terms; ++n) {
    out.y = out.y - term;
    const double tn = term.frobenius_norm();
    if (prev > 0.0) {
      ratios.push_back(tn / prev);
      growing = tn > prev ? growing + 1 : 0;
      if (growing >= 5) throw DivergenceError("disc-series: terms grew over 5 consecutive steps", n);
    }
    double rhat = 0.0;
    for (std::size_t k = ratios.size() > 3 ? ratios.size() - 3 : 0; k < ratios.size(); ++k)
      rhat = std::max(rhat, ratios[k]);
    out.order = n;
    out.ratio = rhat;
    if (rhat < 1.0 && (n > 0 || tn == 0.0) && tn <= tol * (1.0 - rhat) * out.y.frobenius_norm())
      return out;
    if (tn == 0.0) return out;
    prev = tn;
    term = r * term * s_inv;
  }
  throw NumericalError("disc-series: term limit reached", max_terms);
}

}  // namespace

SolveReport solve_disc_series(const SylvesterProblem& prob) {
  prob.validate();
  const Poly p = prob.p ? *prob.p : Poly::monomial(1);
  if (p.degree() < 1) throw InvalidArgument("disc-series: p must have degree at least 1");
  const Spectra s = spectra(prob);
  const CMatrix pa = p(prob.a);
  const CMatrix pb = p(prob.b);
  const double rc = rcond_estimate(pb);
  if (rc < 1e-14) throw SingularityError("disc-series: p(B) is singular", rc > 0.0 ? 1.0 / rc : kInf);
  double rho_a = 0.0, min_b = kInf;
  for (const auto& z : s.a) rho_a = std::max(rho_a, std::abs(p(z)));
  for (const auto& z : s.b) min_b = std::min(min_b, std::abs(p(z)));
  const double spectral = rho_a / min_b;
  if (!(spectral < 1.0)) {
    std::ostringstream os;
    os << "disc-series: rho(p(A)) rho(p(B)^-1) = " << spectral << " is not below 1";
    throw ApplicabilityError(os.str());
  }
  const CMatrix s_inv = inverse(pb);
  const BivarPoly q = divided_difference(p);
  const CMatrix qc = apply(q, prob.a, prob.b, prob.c);

  CMatrix x_post, x_pre;
  int order = 0;
  double ratio = 0.0;
  if (prob.order) {
    order = *prob.order;
    x_post = apply(q, prob.a, prob.b, disc_series_partial(pa, s_inv, prob.c, order));
    x_pre = disc_series_partial(pa, s_inv, qc, order);
  } else {
    const auto post = disc_series_adaptive(pa, s_inv, prob.c, prob.tol, prob.limits.max_terms);
    const auto pre = disc_series_adaptive(pa, s_inv, qc, prob.tol, prob.limits.max_terms);
    x_post = apply(q, prob.a, prob.b, post.y);
    x_pre = pre.y;
    order = std::max(post.order, pre.order);
    ratio = std::max(post.ratio, pre.ratio);
  }
  SolveReport r = finish(prob, Method::DiscSeries, x_post);
  r.order = order;
  r.diagnostics["spectral_ratio"] = spectral;
  r.diagnostics["term_ratio"] = ratio;
  r.diagnostics["variant_difference"] = relative_difference(x_pre, x_post);
  std::ostringstream os;
  os << "rho(p(A))/min|p(sigma(B))|=" << spectral;
  r.certificate = os.str();
  return r;
}

double DiscBound::error_bound(int n, double norm_c) const {
  if (norm_pa == 0.0) return 0.0;
  return norm_q * norm_c * length / (2.0 * std::numbers::pi * eps * delta) * std::pow(r, n + 1);
}

DiscBound truncation_bound_disc(const Poly& p, const CMatrix& a, const CMatrix& b, double eps,
                                double tol, std::optional<GridBox> box, std::size_t resolution) {
  if (!(eps > 0.0)) throw InvalidArgument("truncation_bound_disc: eps must be positive");
  if (!(tol > 0.0)) throw InvalidArgument("truncation_bound_disc: tol must be positive");
  if (p.degree() < 1) throw InvalidArgument("truncation_bound_disc: p must have degree at least 1");
  DiscBound out;
  out.eps = eps;
  out.tol = tol;
  out.norm_pa = op_norm(p(a));
  GridBox gb = box ? *box : default_box(a, b);
  GridRegion ps = pseudospectrum_grid(b, eps, gb, resolution);
  for (int k = 0; k < 4 && !box && ps.touches_border(); ++k) {
    const cplx mid = 0.5 * (gb.lower + gb.upper);
    gb = {mid + 2.0 * (gb.lower - mid), mid + 2.0 * (gb.upper - mid)};
    ps = pseudospectrum_grid(b, eps, gb, resolution);
  }
  const GridRegion vp = vp_grid(p, out.norm_pa, gb, resolution);
  for (std::size_t k = 0; k < ps.mask.size(); ++k)
    if (ps.mask[k] && vp.mask[k])
      throw CertificateError("truncation_bound_disc: V_p(A) meets the eps-pseudospectrum of B");

  const auto eb = eigenvalues(b, "B").values;
  const auto rts = roots(p);
  const std::vector<int> signs(static_cast<std::size_t>(ps.components), 1);
  std::string failure = "truncation_bound_disc: no verified contour around the pseudospectrum";
  constexpr std::size_t kNodes = 2048;
  for (double pad : {1.5, 3.0, 6.0}) {
    std::vector<SignedCircle> sc;
    try {
      sc = component_circles(ps, signs, pad);
    } catch (const CertificateError& e) {
      failure = e.what();
      continue;
    }
    bool ok = true;
    double min_p = kInf;
    for (const auto& c : sc) {
      const Circle& ci = c.circle;
      for (const auto& y : eb)
        if (!std::any_of(sc.begin(), sc.end(), [&](const SignedCircle& o) {
              return std::abs(y - o.circle.center) < o.circle.radius;
            }))
          ok = false;
      for (const auto& z : rts)
        if (std::abs(z - ci.center) < ci.radius) ok = false;
      for (std::size_t k = 0; k < vp.mask.size() && ok; ++k) {
        if (!vp.mask[k]) continue;
        if (std::abs(vp.center(k % vp.nx, k / vp.nx) - ci.center) < ci.radius) ok = false;
      }
      if (!ok) break;
      for (const auto& z : circle_nodes(ci, kNodes)) {
        const double pz = std::abs(p(z));
        if (!(pz > out.norm_pa) || smallest_singular_value(b.shifted(z)) < eps) {
          ok = false;
          break;
        }
        min_p = std::min(min_p, pz);
      }
      if (!ok) break;
    }
    if (!ok) {
      failure = "truncation_bound_disc: contour verification failed";
      continue;
    }
    out.contour.clear();
    out.length = 0.0;
    for (const auto& c : sc) {
      out.contour.push_back(c.circle);
      out.length += 2.0 * std::numbers::pi * c.circle.radius;
    }
    out.delta = min_p - out.norm_pa;
    out.r = out.norm_pa / (out.norm_pa + out.delta);
    out.inverse_bound = out.length / (2.0 * std::numbers::pi * eps * out.delta);
    out.norm_q = op_norm_upper(divided_difference(p), op_norm(a), op_norm(b));
    // Smallest N with error_bound(N, |C|) <= tol |C|.
    out.order = 0;
    while (out.error_bound(out.order, 1.0) > tol) {
      if (++out.order > 1000000) throw NumericalError("truncation_bound_disc: order overflow");
    }
    return out;
  }
  throw CertificateError(failure);
}

SolveReport solve_heinz(const SylvesterProblem& prob) {
  prob.validate();
  const Spectra s = spectra(prob);
  const double shift = real_shift(prob, s, "heinz");
  const CMatrix a = prob.a.shifted(shift);
  const CMatrix b = prob.b.shifted(shift);
  double beta_a = kInf, beta_b = kInf;
  for (const auto& z : s.a) beta_a = std::min(beta_a, z.real() - shift);
  for (const auto& z : s.b) beta_b = std::min(beta_b, shift - z.real());
  const double beta = 0.9 * (beta_a + beta_b);

  // Transient constant: |e^{-tA}| |e^{tB}| <= kappa e^{-beta t}.
  // The window doubles while the sampled maximum sits at its right end.
  double probe_span = 5.0 / beta;
  double kappa = 1.0;
  for (int widen = 0; widen < 10; ++widen, probe_span *= 2.0) {
    kappa = 1.0;
    int arg = 0;
    for (int k = 0; k <= 32; ++k) {
      const double t = probe_span * k / 32.0;
      const double v = op_norm(expm(-t * a)) * op_norm(expm(t * b)) * std::exp(beta * t);
      if (v > kappa) {
        kappa = v;
        arg = k;
      }
    }
    if (arg < 30) break;
  }
  const double scale = op_norm(a) + op_norm(b);
  const double horizon = std::log(10.0 * kappa * scale / (beta * prob.tol)) / beta;

  std::vector<double> gx, gw;
  gauss_legendre(8, gx, gw);
  auto integrate = [&](int panels) {
    const double h = horizon / panels;
    CMatrix g = CMatrix::zeros(prob.c.rows(), prob.c.cols());
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double t = 0.5 * h * (gx[i] + 1.0);
      g = g + (0.5 * h * gw[i]) * (expm(-t * a) * prob.c * expm(t * b));
    }
    // Every panel is the first one conjugated by the panel-step exponentials.
    const CMatrix step_a = expm(-h * a);
    const CMatrix step_b = expm(h * b);
    CMatrix left = CMatrix::identity(a.rows()), right = CMatrix::identity(b.rows());
    CMatrix x = CMatrix::zeros(prob.c.rows(), prob.c.cols());
    for (int k = 0; k < panels; ++k) {
      x = x + left * g * right;
      left = left * step_a;
      right = right * step_b;
    }
    return x;
  };
  int panels = 8;
  CMatrix x = integrate(panels);
  while (true) {
    if (panels * 2 > prob.limits.max_panels)
      throw NumericalError("heinz: quadrature did not converge within the panel limit", panels);
    panels *= 2;
    CMatrix next = integrate(panels);
    const double change = (next - x).frobenius_norm();
    x = std::move(next);
    if (change <= prob.tol * x.frobenius_norm()) break;
  }
  SolveReport r = finish(prob, Method::Heinz, std::move(x));
  r.order = panels * static_cast<int>(gx.size());
  r.iterations = panels;
  r.diagnostics["shift"] = shift;
  r.diagnostics["kappa"] = kappa;
  r.diagnostics["horizon"] = horizon;
  r.diagnostics["probe_span"] = probe_span;
  return r;
}

SolveReport solve_sign_newton(const SylvesterProblem& prob) {
  prob.validate();
  const Spectra s = spectra(prob);
  const double shift = real_shift(prob, s, "sign-newton");
  const CMatrix m = block_triangular(prob.a.shifted(shift), prob.b.shifted(shift), prob.c);
  CMatrix sk = m;
  double prev_change = kInf;
  int it = 0;
  for (;;) {
    if (it >= prob.limits.max_iterations)
      throw NumericalError("sign-newton: iteration cap reached", it);
    const double rc = rcond_estimate(sk);
    if (rc < 1e-14) throw ConditioningError("sign-newton: iterate is nearly singular");
    CMatrix next = 0.5 * (sk + inverse(sk));
    ++it;
    const double change = (next - sk).frobenius_norm();
    const double size = next.frobenius_norm();
    sk = std::move(next);
    if (change <= prob.tol * size) break;
    // Rounding floor: once small, a change that stops shrinking is noise.
    if (change < 1e-8 * size && change >= prev_change) break;
    prev_change = change;
  }
  const std::size_t na = prob.a.rows(), nb = prob.b.rows();
  const CMatrix x = 0.5 * sk.block(0, na, na, nb);
  const double defect_sq = (sk * sk - CMatrix::identity(na + nb)).frobenius_norm();
  const double defect_blocks =
      std::max({(sk.block(0, 0, na, na) - CMatrix::identity(na)).frobenius_norm(),
                (sk.block(na, na, nb, nb) + CMatrix::identity(nb)).frobenius_norm(),
                sk.block(na, 0, nb, na).frobenius_norm()});
  SolveReport r = finish(prob, Method::SignNewton, x);
  r.iterations = it;
  r.diagnostics["shift"] = shift;
  r.diagnostics["sign_square_defect"] = defect_sq;
  r.diagnostics["sign_block_defect"] = defect_blocks;
  return r;
}

std::vector<Rational> inverse_sqrt_coefficients(int count) {
  std::vector<Rational> beta;
  if (count <= 0) return beta;
  beta.emplace_back(1);
  for (int k = 1; k < count; ++k) beta.push_back(beta.back() * Rational(-(2 * k - 1), 2 * k));
  return beta;
}

SolveReport solve_sign_series_m2(const SylvesterProblem& prob) {
  prob.validate();
  const Spectra s = spectra(prob);
  double rho = 0.0;
  for (const auto& z : s.a) rho = std::max(rho, std::abs(std::pow(z, 4) - 1.0));
  for (const auto& z : s.b) rho = std::max(rho, std::abs(std::pow(z, 4) - 1.0));
  if (!(rho < 1.0)) {
    std::ostringstream os;
    os << "sign-series-m2: rho(M^4 - I) = " << rho << " is not below 1";
    throw DivergenceError(os.str());
  }
  if (prob.c.max_abs() == 0.0 && spectral_gap(prob.a, prob.b) > 0.0) {
    // W = M^4 - I is block diagonal; the k = 0 term already has a zero off-diagonal block.
    SolveReport r = finish(prob, Method::SignSeriesM2,
                           CMatrix::zeros(prob.a.rows(), prob.b.rows()));
    r.order = 0;
    r.diagnostics["rho_w"] = rho;
    return r;
  }
  for (const auto& z : s.a)
    if (!((z * z).real() > 0.0))
      throw ApplicabilityError("sign-series-m2: sigma(A^2) must lie in the right half plane");
  for (const auto& z : s.b)
    if (!((z * z).real() < 0.0))
      throw ApplicabilityError("sign-series-m2: sigma(B^2) must lie in the left half plane");

  const std::size_t na = prob.a.rows(), nb = prob.b.rows(), n = na + nb;
  const CMatrix m = block_triangular(prob.a, prob.b, prob.c);
  const CMatrix m2 = m * m;
  const CMatrix w = m2 * m2 - CMatrix::identity(n);
  CMatrix sum = CMatrix::identity(n);
  CMatrix wk = CMatrix::identity(n);
  double beta = 1.0;
  int k = 0, quiet = 0;
  while (quiet < 2) {
    if (++k > prob.limits.max_terms) throw NumericalError("sign-series-m2: term limit reached", k);
    beta *= -(2.0 * k - 1.0) / (2.0 * k);
    wk = wk * w;
    const CMatrix term = beta * wk;
    sum = sum + term;
    quiet = term.frobenius_norm() <= prob.tol * sum.frobenius_norm() ? quiet + 1 : 0;
  }
  const CMatrix sgn = m2 * sum;
  const CMatrix x = 0.5 * sgn.block(0, na, na, nb);
  SolveReport r = finish(prob, Method::SignSeriesM2, x);
  r.order = k;
  r.diagnostics["rho_w"] = rho;
  r.diagnostics["sign_square_defect"] = (sgn * sgn - CMatrix::identity(n)).frobenius_norm();
  return r;
}

SolveReport solve_multicentric(const SylvesterProblem& prob) {
  prob.validate();
  if (!prob.p) throw InvalidArgument("multicentric: a separating polynomial is required");
  const Poly& p = *prob.p;
  if (p.degree() < 1) throw InvalidArgument("multicentric: p must have degree at least 1");
  const CMatrix& a = prob.a;
  const CMatrix& b = prob.b;
  const CMatrix& c = prob.c;
  const CMatrix m = block_triangular(a, b, c);
  const double norm_pm = op_norm(p(m));
  double t = prob.margin ? *prob.margin : 0.05 * norm_pm;
  if (!(t > 0.0)) {
    // |p(M)| = 0: start where the discs around the roots have radius about a
    // twentieth of the root spacing; the loop below grows t from there.
    const auto rts = roots(p);
    double scale = 1.0;
    if (rts.size() > 1) {
      scale = kInf;
      for (std::size_t j = 0; j < rts.size(); ++j)
        for (std::size_t k = 0; k < rts.size(); ++k)
          if (j != k)
            scale = std::min(scale, std::abs(p.derivative()(rts[j])) * std::abs(rts[j] - rts[k]));
    }
    t = 0.05 * scale;
  }

  SeparationOptions so;
  so.kind = SeparationKind::Components;
  so.box = prob.box;
  so.resolution = prob.resolution;
  if (!prob.margin) {
    // Grow t while the grid cannot resolve the eigenvalue cells, then widen it
    // to halfway between |p(M)| and the level at which the components merge.
    so.margin = t;
    SeparationCertificate probe = separation_certificate(p, a, b, c, so);
    for (int k = 0; k < 6 && probe.status == SeparationStatus::Inconclusive; ++k) {
      t *= 2.0;
      so.margin = t;
      probe = separation_certificate(p, a, b, c, so);
    }
    if (probe.status == SeparationStatus::Separated && probe.score > 0.0 &&
        std::isfinite(probe.score)) {
      const double merge = probe.level * (1.0 + probe.score);
      t = std::max(t, 0.5 * (merge - probe.norm));
    }
  }
  std::string last_failure;
  std::string last_status;
  for (int attempt = 0; attempt <= prob.limits.max_margin_halvings; ++attempt, t *= 0.5) {
    so.margin = t;
    SeparationCertificate cert = separation_certificate(p, a, b, c, so);
    if (cert.status != SeparationStatus::Separated) {
      last_status = "multicentric: certificate is " + to_string(cert.status) +
                    (cert.cause.empty() ? "" : " (" + cert.cause + ")");
      continue;
    }
    const std::vector<int> signs = root_signs(cert);
    std::vector<SignedCircle> contour;
    std::vector<double> decay;
    try {
      contour = level_set_contour(cert);
      CircleSet circles;
      for (const auto& sc : contour) circles.push_back(sc.circle);
      decay = decay_constants(p, cert.level, cert.roots, circles);
    } catch (const CertificateError& e) {
      last_failure = e.what();
      continue;
    }

    const double r = cert.norm / cert.level;
    const LagrangeBasis lb = lagrange_basis(cert.roots);
    std::vector<Block> deltas;
    double prefactor = 0.0;
    for (std::size_t j = 0; j < lb.basis.size(); ++j) {
      deltas.push_back(block_of(lb.basis[j], a, b, c));
      prefactor += decay[j] * op_norm(assemble(deltas.back()));
    }
    const int order = truncation_order(r, prefactor, prob.tol);
    TaylorOptions topts;
    topts.envelope_radius = cert.level;
    MulticentricSeries series = taylor_coeffs(p, phi_germ_piecewise_constant(signs, order), order, topts);
    attach_decay(series, cert.level, decay);

    // phi(M) = sum_j delta_j(M) sum_n alpha_{j,n} p(M)^n with p(M)^n in block form.
    const CMatrix rr = p(a), ss = p(b);
    const CMatrix tt = apply(divided_difference(p), a, b, c);
    BlockPowerLadder ladder(rr, ss, tt);
    std::vector<Block> branch(lb.basis.size(),
                              Block{CMatrix::zeros(a.rows(), a.rows()), CMatrix::zeros(a.rows(), b.rows()),
                                    CMatrix::zeros(b.rows(), b.rows())});
    for (int n = 0; n <= order; ++n) {
      if (n > 0) ladder.advance();
      for (std::size_t j = 0; j < branch.size(); ++j) {
        const cplx al = series.alpha[j][static_cast<std::size_t>(n)];
        branch[j].tl = branch[j].tl + al * ladder.top_left();
        branch[j].tr = branch[j].tr + al * ladder.top_right();
        branch[j].br = branch[j].br + al * ladder.bottom_right();
      }
    }
    Block phi{CMatrix::zeros(a.rows(), a.rows()), CMatrix::zeros(a.rows(), b.rows()),
              CMatrix::zeros(b.rows(), b.rows())};
    for (std::size_t j = 0; j < branch.size(); ++j) {
      const Block term = block_mul(deltas[j], branch[j]);
      phi.tl = phi.tl + term.tl;
      phi.tr = phi.tr + term.tr;
      phi.br = phi.br + term.br;
    }
    const std::size_t na = a.rows(), nb = b.rows();
    const CMatrix q = 0.5 * (assemble(phi) + CMatrix::identity(na + nb));
    const CMatrix x = q.block(0, na, na, nb);
    const double bound = 0.5 * truncation_bound(r, prefactor, order);
    const double idem = (q * q - q).frobenius_norm();
    const double d11 = (q.block(0, 0, na, na) - CMatrix::identity(na)).frobenius_norm();
    const double d21 = q.block(na, 0, nb, na).frobenius_norm();
    const double d22 = q.block(na, na, nb, nb).frobenius_norm();
    const double slack = 1e-10 * std::max(1.0, q.frobenius_norm());
    if (idem > 4.0 * bound + slack)
      throw NumericalError("multicentric: projector check failed (|Q^2 - Q| exceeds the bound)");

    SolveReport rep = finish(prob, Method::Multicentric, x);
    rep.order = order;
    rep.bound = bound;
    rep.certificate = describe(cert);
    rep.diagnostics["ratio"] = r;
    rep.diagnostics["prefactor"] = prefactor;
    rep.diagnostics["margin"] = cert.margin;
    rep.diagnostics["level"] = cert.level;
    rep.diagnostics["digits"] = series.digits;
    rep.diagnostics["projector_idempotency"] = idem;
    rep.diagnostics["projector_q11"] = d11;
    rep.diagnostics["projector_q21"] = d21;
    rep.diagnostics["projector_q22"] = d22;
    rep.diagnostics["contour_circles"] = static_cast<double>(contour.size());
    return rep;
  }
  if (last_failure.empty()) throw ApplicabilityError(last_status);
  throw CertificateError("multicentric: contour verification failed after margin halving: " +
                         last_failure);
}

}  // namespace polysep

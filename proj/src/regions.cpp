#include "polysep/regions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>

#include "polysep/bivarcalc.hpp"

namespace polysep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_resolution(std::size_t resolution) {
  if (resolution < 16) throw InvalidArgument("grid: resolution must be at least 16");
}

void check_box(const GridBox& box) {
  if (!(box.upper.real() > box.lower.real()) || !(box.upper.imag() > box.lower.imag()))
    throw InvalidArgument("grid: box corners out of order");
}

GridBox scaled(const GridBox& box, double factor) {
  const cplx mid = 0.5 * (box.lower + box.upper);
  return {mid + factor * (box.lower - mid), mid + factor * (box.upper - mid)};
}

template <class F>
void for_neighbours4(const GridRegion& g, std::size_t k, F&& f) {
  const std::size_t ix = k % g.nx, iy = k / g.nx;
  if (ix > 0) f(k - 1);
  if (ix + 1 < g.nx) f(k + 1);
  if (iy > 0) f(k - g.nx);
  if (iy + 1 < g.ny) f(k + g.nx);
}

std::vector<cplx> centered_unit(std::size_t count) {
  std::vector<cplx> z(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    z[k] = {std::cos(th), std::sin(th)};
  }
  return z;
}

}  // namespace

double GridRegion::cell_diagonal() const {
  const auto s = spec();
  return std::hypot(s.dx(), s.dy());
}

std::optional<std::size_t> GridRegion::cell_of(cplx z) const {
  const auto s = spec();
  const double fx = (z.real() - box.lower.real()) / s.dx();
  const double fy = (z.imag() - box.lower.imag()) / s.dy();
  if (!(fx >= 0.0) || !(fy >= 0.0) || fx >= static_cast<double>(nx) || fy >= static_cast<double>(ny))
    return std::nullopt;
  return static_cast<std::size_t>(fy) * nx + static_cast<std::size_t>(fx);
}

bool GridRegion::contains(cplx z) const {
  const auto k = cell_of(z);
  return k && mask[*k];
}

int GridRegion::component_of(cplx z) const {
  const auto k = cell_of(z);
  return k ? labels[*k] : -1;
}

bool GridRegion::interior(cplx z) const {
  const auto k = cell_of(z);
  if (!k || !mask[*k]) return false;
  const long ix = static_cast<long>(*k % nx), iy = static_cast<long>(*k / nx);
  for (long dy = -1; dy <= 1; ++dy) {
    for (long dx = -1; dx <= 1; ++dx) {
      const long x = ix + dx, y = iy + dy;
      if (x < 0 || y < 0 || x >= static_cast<long>(nx) || y >= static_cast<long>(ny)) return false;
      if (labels[static_cast<std::size_t>(y) * nx + static_cast<std::size_t>(x)] != labels[*k])
        return false;
    }
  }
  return true;
}

bool GridRegion::exterior(cplx z) const {
  const auto k = cell_of(z);
  if (!k) return true;
  const long ix = static_cast<long>(*k % nx), iy = static_cast<long>(*k / nx);
  for (long dy = -1; dy <= 1; ++dy) {
    for (long dx = -1; dx <= 1; ++dx) {
      const long x = ix + dx, y = iy + dy;
      if (x < 0 || y < 0 || x >= static_cast<long>(nx) || y >= static_cast<long>(ny)) continue;
      if (mask[static_cast<std::size_t>(y) * nx + static_cast<std::size_t>(x)]) return false;
    }
  }
  return true;
}

bool GridRegion::touches_border() const {
  for (std::size_t ix = 0; ix < nx; ++ix)
    if (mask[ix] || mask[(ny - 1) * nx + ix]) return true;
  for (std::size_t iy = 0; iy < ny; ++iy)
    if (mask[iy * nx] || mask[iy * nx + nx - 1]) return true;
  return false;
}

std::vector<GridRegion::Bounds> GridRegion::component_bounds() const {
  std::vector<Bounds> out(static_cast<std::size_t>(components));
  std::vector<std::size_t> x0(out.size(), nx), x1(out.size(), 0), y0(out.size(), ny),
      y1(out.size(), 0);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] < 0) continue;
    const auto l = static_cast<std::size_t>(labels[k]);
    const std::size_t ix = k % nx, iy = k / nx;
    x0[l] = std::min(x0[l], ix);
    x1[l] = std::max(x1[l], ix);
    y0[l] = std::min(y0[l], iy);
    y1[l] = std::max(y1[l], iy);
    ++out[l].cells;
  }
  const auto s = spec();
  for (std::size_t l = 0; l < out.size(); ++l) {
    out[l].lower = {box.lower.real() + static_cast<double>(x0[l]) * s.dx(),
                    box.lower.imag() + static_cast<double>(y0[l]) * s.dy()};
    out[l].upper = {box.lower.real() + static_cast<double>(x1[l] + 1) * s.dx(),
                    box.lower.imag() + static_cast<double>(y1[l] + 1) * s.dy()};
  }
  return out;
}

void label_components(GridRegion& g) {
  const std::size_t cells = g.nx * g.ny;
  g.mask.assign(cells, 0);
  for (std::size_t k = 0; k < cells; ++k) g.mask[k] = g.floor[k] <= g.level ? 1 : 0;
  g.labels.assign(cells, -1);
  g.components = 0;
  std::deque<std::size_t> queue;
  for (std::size_t k = 0; k < cells; ++k) {
    if (!g.mask[k] || g.labels[k] >= 0) continue;
    const int label = g.components++;
    g.labels[k] = label;
    queue.push_back(k);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for_neighbours4(g, u, [&](std::size_t v) {
        if (g.mask[v] && g.labels[v] < 0) {
          g.labels[v] = label;
          queue.push_back(v);
        }
      });
    }
  }
}

GridRegion with_level(const GridRegion& g, double level) {
  if (!(level >= 0.0)) throw InvalidArgument("with_level: level must be non-negative");
  GridRegion out = g;
  out.level = level;
  label_components(out);
  return out;
}

GridRegion fill_holes(const GridRegion& g) {
  GridRegion out = g;
  const std::size_t cells = g.nx * g.ny;
  std::vector<std::uint8_t> outside(cells, 0);
  std::deque<std::size_t> queue;
  auto seed = [&](std::size_t k) {
    if (!g.mask[k] && !outside[k]) {
      outside[k] = 1;
      queue.push_back(k);
    }
  };
  for (std::size_t ix = 0; ix < g.nx; ++ix) {
    seed(ix);
    seed((g.ny - 1) * g.nx + ix);
  }
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    seed(iy * g.nx);
    seed(iy * g.nx + g.nx - 1);
  }
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for_neighbours4(g, u, [&](std::size_t v) { seed(v); });
  }
  // Hole cells take a floor at the level so relabeling keeps them.
  for (std::size_t k = 0; k < cells; ++k)
    if (!g.mask[k] && !outside[k]) out.floor[k] = std::min(out.floor[k], g.level);
  label_components(out);
  return out;
}

GridBox box_around(std::span<const cplx> points, double pad) {
  if (points.empty()) throw InvalidArgument("box_around: no points");
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& z : points) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  const cplx mid{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  double half = 0.5 * std::max(x1 - x0, y1 - y0) + std::max(pad, 0.0);
  if (!(half > 0.0)) half = 1.0;
  return {mid - cplx(half, half), mid + cplx(half, half)};
}

GridBox default_box(const CMatrix& a, const CMatrix& b) {
  std::vector<cplx> pts = eigenvalues(a, "A").values;
  const auto eb = eigenvalues(b, "B").values;
  pts.insert(pts.end(), eb.begin(), eb.end());
  return box_around(pts, 0.5 * (op_norm(a) + op_norm(b)));
}

GridRegion vp_grid(const Poly& p, double level, const GridBox& box, std::size_t resolution,
                   kernels::Exec exec) {
  check_resolution(resolution);
  check_box(box);
  if (!(level >= 0.0)) throw InvalidArgument("vp_grid: level must be non-negative");
  GridRegion g;
  g.kind = GridKind::Lemniscate;
  g.box = box;
  g.nx = g.ny = resolution;
  g.level = level;
  g.values = kernels::abs_poly_grid(p, g.spec(), exec);
  g.floor = kernels::abs_poly_floor_grid(p, g.spec(), 0.5 * g.cell_diagonal(), exec);
  label_components(g);
  return g;
}

GridRegion pseudospectrum_grid(const CMatrix& t, double eps, const GridBox& box,
                               std::size_t resolution, kernels::Exec exec) {
  check_resolution(resolution);
  check_box(box);
  if (!(eps > 0.0)) throw InvalidArgument("pseudospectrum_grid: eps must be positive");
  GridRegion g;
  g.kind = GridKind::Pseudospectrum;
  g.box = box;
  g.nx = g.ny = resolution;
  g.level = eps;
  g.values = kernels::sigma_min_grid(t, g.spec(), exec);
  // sigma_min(z - T) is 1-Lipschitz in z.
  const double r = 0.5 * g.cell_diagonal();
  g.floor.resize(g.values.size());
  for (std::size_t k = 0; k < g.values.size(); ++k) g.floor[k] = std::max(0.0, g.values[k] - r);
  label_components(g);
  return g;
}

std::string to_pgm(const GridRegion& g) {
  std::vector<double> lg(g.values.size());
  double lo = kInf, hi = -kInf;
  for (std::size_t k = 0; k < lg.size(); ++k) {
    lg[k] = std::log10(std::max(g.values[k], 1e-300));
    lo = std::min(lo, lg[k]);
    hi = std::max(hi, lg[k]);
  }
  std::ostringstream os;
  os << "P2\n# log10 cell values, level " << std::setprecision(17) << g.level << "\n"
     << g.nx << ' ' << g.ny << "\n255\n";
  for (std::size_t row = 0; row < g.ny; ++row) {
    const std::size_t iy = g.ny - 1 - row;  // top row is the largest imaginary part
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double v = lg[iy * g.nx + ix];
      const int q = hi > lo ? static_cast<int>(std::lround(255.0 * (v - lo) / (hi - lo))) : 0;
      os << q << (ix + 1 < g.nx ? ' ' : '\n');
    }
  }
  return os.str();
}

std::string to_csv(const GridRegion& g) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t row = 0; row < g.ny; ++row) {
    const std::size_t iy = g.ny - 1 - row;
    for (std::size_t ix = 0; ix < g.nx; ++ix)
      os << g.values[iy * g.nx + ix] << (ix + 1 < g.nx ? ',' : '\n');
  }
  return os.str();
}

std::string to_string(SeparationStatus s) {
  switch (s) {
    case SeparationStatus::Separated: return "separated";
    case SeparationStatus::NotSeparated: return "not-separated";
    case SeparationStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(SeparationKind k) {
  return k == SeparationKind::Components ? "components" : "disc";
}

namespace {

/// Smallest level at which a grid path joins some source cell to some target cell.
double bottleneck_level(const GridRegion& g, const std::vector<std::size_t>& sources,
                        const std::vector<std::size_t>& targets) {
  if (sources.empty() || targets.empty()) return kInf;
  std::vector<double> best(g.floor.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto s : sources) {
    if (g.floor[s] < best[s]) {
      best[s] = g.floor[s];
      pq.push({best[s], s});
    }
  }
  std::vector<std::uint8_t> is_target(g.floor.size(), 0);
  for (auto t : targets) is_target[t] = 1;
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > best[u]) continue;
    if (is_target[u]) return d;
    for_neighbours4(g, u, [&](std::size_t v) {
      const double nd = std::max(d, g.floor[v]);
      if (nd < best[v]) {
        best[v] = nd;
        pq.push({nd, v});
      }
    });
  }
  return kInf;
}

GridRegion grid_with_expansion(const Poly& p, double level, GridBox box, bool fixed_box,
                               const SeparationOptions& opts) {
  GridRegion g = vp_grid(p, level, box, opts.resolution);
  for (int k = 0; k < opts.max_expansions && !fixed_box && g.touches_border(); ++k) {
    box = scaled(box, 2.0);
    g = vp_grid(p, level, box, opts.resolution);
  }
  return g;
}

}  // namespace

SeparationCertificate separation_certificate(const Poly& p, const CMatrix& a, const CMatrix& b,
                                             const CMatrix& c, const SeparationOptions& opts) {
  if (!a.is_square() || !b.is_square()) throw DimensionError("separation: A and B must be square");
  if (c.rows() != a.rows() || c.cols() != b.rows())
    throw DimensionError("separation: C must be rows(A) x rows(B)");
  if (p.degree() < 1) throw InvalidArgument("separation: p must have degree at least 1");

  SeparationCertificate cert;
  cert.p = p;
  cert.kind = opts.kind;
  try {
    cert.eig_a = eigenvalues(a, "A").values;
    cert.eig_b = eigenvalues(b, "B").values;
  } catch (const NumericalError& e) {
    cert.status = SeparationStatus::Inconclusive;
    cert.cause = e.what();
    return cert;
  }
  try {
    cert.roots = roots(p);
  } catch (const Error&) {
    cert.roots.clear();
  }

  if (opts.kind == SeparationKind::Components) {
    const CMatrix m = opts.block_diagonal
                          ? CMatrix::blocks(a, CMatrix::zeros(a.rows(), b.rows()),
                                            CMatrix::zeros(b.rows(), a.rows()), b)
                          : block_triangular(a, b, c);
    cert.norm = op_norm(p(m));
  } else {
    cert.norm = op_norm(p(a));
  }
  cert.margin = opts.margin >= 0.0 ? opts.margin : 0.05 * cert.norm;
  cert.level = cert.norm + cert.margin;

  const GridBox box = opts.box ? *opts.box : default_box(a, b);
  cert.region = grid_with_expansion(p, cert.level, box, opts.box.has_value(), opts);
  const GridRegion& g = cert.region;
  for (const auto& z : cert.eig_a) cert.component_a.push_back(g.component_of(z));
  for (const auto& z : cert.eig_b) cert.component_b.push_back(g.component_of(z));
  for (const auto& z : cert.roots) cert.component_roots.push_back(g.component_of(z));

  if (opts.kind == SeparationKind::Disc) {
    double min_pb = kInf;
    for (const auto& z : cert.eig_b) min_pb = std::min(min_pb, std::abs(p(z)));
    cert.score = cert.level > 0.0 ? (min_pb - cert.level) / cert.level : (min_pb > 0.0 ? 1.0 : 0.0);
    if (!(min_pb > cert.level)) {
      cert.status = SeparationStatus::NotSeparated;
      cert.cause = "an eigenvalue of B lies in the lemniscate set of A";
      cert.score = std::min(cert.score, 0.0);
      return cert;
    }
    for (const auto& z : cert.eig_b) {
      if (!g.exterior(z)) {
        cert.status = SeparationStatus::Inconclusive;
        cert.cause = "an eigenvalue of B lies within one cell of the lemniscate boundary";
        return cert;
      }
    }
    cert.status = SeparationStatus::Separated;
    return cert;
  }

  std::vector<std::size_t> cells_a, cells_b;
  bool outside = false;
  for (const auto& z : cert.eig_a) {
    if (auto k = g.cell_of(z)) cells_a.push_back(*k); else outside = true;
  }
  for (const auto& z : cert.eig_b) {
    if (auto k = g.cell_of(z)) cells_b.push_back(*k); else outside = true;
  }
  const double merge = bottleneck_level(g, cells_a, cells_b);
  cert.score = cert.level > 0.0 ? (merge - cert.level) / cert.level : 0.0;

  for (auto ka : cells_a) {
    if (std::find(cells_b.begin(), cells_b.end(), ka) != cells_b.end()) {
      cert.status = SeparationStatus::NotSeparated;
      cert.cause = "eigenvalues of A and B share a grid cell";
      cert.score = std::min(cert.score, 0.0);
      return cert;
    }
  }
  if (outside) {
    cert.status = SeparationStatus::Inconclusive;
    cert.cause = "an eigenvalue lies outside the grid box";
    return cert;
  }
  for (const auto& z : cert.eig_a) {
    if (!g.interior(z)) {
      cert.status = SeparationStatus::Inconclusive;
      cert.cause = "an eigenvalue of A lies within one cell of a component boundary";
      return cert;
    }
  }
  for (const auto& z : cert.eig_b) {
    if (!g.interior(z)) {
      cert.status = SeparationStatus::Inconclusive;
      cert.cause = "an eigenvalue of B lies within one cell of a component boundary";
      return cert;
    }
  }
  for (int la : cert.component_a) {
    if (std::find(cert.component_b.begin(), cert.component_b.end(), la) != cert.component_b.end()) {
      cert.status = SeparationStatus::NotSeparated;
      cert.cause = "a component contains eigenvalues of both A and B";
      cert.score = std::min(cert.score, 0.0);
      return cert;
    }
  }
  cert.status = SeparationStatus::Separated;
  return cert;
}

namespace {

std::vector<int> component_signs(const SeparationCertificate& cert) {
  std::vector<int> sign(static_cast<std::size_t>(cert.region.components), 0);
  for (int l : cert.component_a)
    if (l >= 0) sign[static_cast<std::size_t>(l)] = 1;
  for (int l : cert.component_b)
    if (l >= 0) sign[static_cast<std::size_t>(l)] = -1;
  return sign;
}

void require_separated_components(const SeparationCertificate& cert, const char* who) {
  if (cert.kind != SeparationKind::Components)
    throw InvalidArgument(std::string(who) + ": needs a components certificate");
  if (cert.status != SeparationStatus::Separated)
    throw ApplicabilityError(std::string(who) + ": certificate is " + to_string(cert.status));
}

}  // namespace

std::vector<int> root_signs(const SeparationCertificate& cert) {
  require_separated_components(cert, "root_signs");
  const auto sign = component_signs(cert);
  std::vector<int> out;
  for (std::size_t j = 0; j < cert.roots.size(); ++j) {
    const cplx z = cert.roots[j];
    if (!cert.region.interior(z)) {
      std::ostringstream os;
      os << "root_signs: root " << z << " lies within one cell of a component boundary";
      throw CertificateError(os.str());
    }
    const int s = sign[static_cast<std::size_t>(cert.region.component_of(z))];
    out.push_back(s == 0 ? 1 : s);
  }
  return out;
}

std::vector<SignedCircle> component_circles(const GridRegion& g,
                                            std::span<const int> component_sign,
                                            double pad_cells) {
  if (component_sign.size() != static_cast<std::size_t>(g.components))
    throw InvalidArgument("component_circles: one sign per component");
  const auto bounds = g.component_bounds();
  const double pad = pad_cells * g.cell_diagonal();
  std::vector<SignedCircle> circles;
  for (std::size_t l = 0; l < bounds.size(); ++l) {
    const cplx mid = 0.5 * (bounds[l].lower + bounds[l].upper);
    const double r = 0.5 * std::abs(bounds[l].upper - bounds[l].lower) + pad;
    circles.push_back({{mid, r}, component_sign[l]});
  }
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < circles.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < circles.size() && !merged; ++j) {
        const auto& ci = circles[i].circle;
        const auto& cj = circles[j].circle;
        const double d = std::abs(cj.center - ci.center);
        if (d >= ci.radius + cj.radius) continue;
        const int si = circles[i].sign, sj = circles[j].sign;
        if (si != 0 && sj != 0 && si != sj)
          throw CertificateError("component_circles: circles around A and B components intersect");
        Circle m;
        if (d + cj.radius <= ci.radius) {
          m = ci;
        } else if (d + ci.radius <= cj.radius) {
          m = cj;
        } else {
          m.radius = 0.5 * (d + ci.radius + cj.radius);
          m.center = ci.center + (cj.center - ci.center) / d * (m.radius - ci.radius);
        }
        circles[i] = {m, si != 0 ? si : sj};
        circles.erase(circles.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
      }
    }
  }
  for (auto& c : circles)
    if (c.sign == 0) c.sign = 1;
  return circles;
}

std::vector<SignedCircle> level_set_contour(const SeparationCertificate& cert, std::size_t nodes) {
  require_separated_components(cert, "level_set_contour");
  const auto sign = component_signs(cert);
  const auto unit = centered_unit(nodes);
  std::string last = "level_set_contour: no circle set verified";
  for (double pad : {1.5, 3.0, 6.0}) {
    std::vector<SignedCircle> circles;
    try {
      circles = component_circles(cert.region, sign, pad);
    } catch (const CertificateError& e) {
      last = e.what();
      break;  // larger pads only make intersections worse
    }
    bool ok = true;
    for (const auto& sc : circles) {
      for (const auto& u : unit) {
        if (!(std::abs(cert.p(sc.circle.center + sc.circle.radius * u)) > cert.level)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return circles;
    last = "level_set_contour: |p| <= level at a contour node";
  }
  throw CertificateError(last);
}

std::vector<std::pair<Poly, std::string>> eta_candidates(const CMatrix& a, int degree,
                                                         int center_grid) {
  if (degree < 1) throw InvalidArgument("eta_candidates: degree must be at least 1");
  const auto ea = eigenvalues(a, "A").values;
  std::vector<std::pair<Poly, std::string>> out;

  // Leja points on the spectrum, topped up from a circle around it when the
  // degree exceeds the number of eigenvalues.
  std::vector<cplx> pool = ea;
  cplx centroid = 0.0;
  for (const auto& z : ea) centroid += z;
  centroid /= static_cast<double>(ea.size());
  if (static_cast<std::size_t>(degree) > ea.size()) {
    double rad = 0.0;
    for (const auto& z : ea) rad = std::max(rad, std::abs(z - centroid));
    if (rad == 0.0) rad = 1e-3 * (1.0 + std::abs(centroid));
    for (const auto& u : centered_unit(64)) pool.push_back(centroid + rad * u);
  }
  out.emplace_back(Poly::from_roots(leja_points(pool, static_cast<std::size_t>(degree))), "leja");

  std::vector<cplx> centers{0.0, centroid};
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& z : ea) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  const int n = std::max(center_grid, 1);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double fx = n == 1 ? 0.5 : static_cast<double>(ix) / (n - 1);
      const double fy = n == 1 ? 0.5 : static_cast<double>(iy) / (n - 1);
      centers.emplace_back(x0 + fx * (x1 - x0), y0 + fy * (y1 - y0));
    }
  }
  std::vector<cplx> seen;
  for (const auto& c : centers) {
    if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
    seen.push_back(c);
    std::vector<cplx> r(static_cast<std::size_t>(degree), c);
    std::ostringstream os;
    os << "shifted-power c=" << c;
    out.emplace_back(Poly::from_roots(r), os.str());
  }
  return out;
}

EtaEstimate eta_estimate(const CMatrix& a, const CMatrix& b, int dmax, const EtaOptions& opts) {
  if (!a.is_square() || !b.is_square()) throw DimensionError("eta_estimate: square matrices required");
  if (dmax < 1) throw InvalidArgument("eta_estimate: dmax must be at least 1");
  const auto ea = eigenvalues(a, "A").values;
  const auto eb = eigenvalues(b, "B").values;
  EtaEstimate est;
  double running = kInf;
  for (int d = 1; d <= dmax; ++d) {
    EtaRow row;
    row.degree = d;
    row.best = kInf;
    for (auto& [p, origin] : eta_candidates(a, d, opts.center_grid)) {
      const CMatrix pb = p(b);
      if (rcond_estimate(pb) < 1e-12) {
        ++row.skipped;
        est.skipped.push_back(origin + " (degree " + std::to_string(d) + ")");
        continue;
      }
      EtaCandidate cand;
      cand.p = p;
      cand.origin = origin;
      cand.norm_pa = op_norm(p(a));
      cand.norm_pb_inv = 1.0 / smallest_singular_value(pb);
      cand.eta = std::pow(cand.norm_pa * cand.norm_pb_inv, 1.0 / d);
      double rho_a = 0.0, min_b = kInf;
      for (const auto& z : ea) rho_a = std::max(rho_a, std::abs(p(z)));
      for (const auto& z : eb) min_b = std::min(min_b, std::abs(p(z)));
      cand.spectral = rho_a / min_b;
      ++row.evaluated;
      if (cand.eta < row.best) {
        row.best = cand.eta;
        row.best_poly = p;
        row.best_origin = origin;
        row.best_spectral = cand.spectral;
      }
      if (opts.keep_candidates) est.candidates.push_back(std::move(cand));
    }
    running = std::min(running, row.best);
    row.running_min = running;
    est.rows.push_back(std::move(row));
  }
  return est;
}

SearchResult search_separating_poly(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                                    const SearchOptions& opts) {
  if (opts.min_degree < 1 || opts.max_degree < opts.min_degree)
    throw InvalidArgument("search: bad degree range");
  const auto ea = eigenvalues(a, "A").values;
  const auto eb = eigenvalues(b, "B").values;

  std::vector<std::pair<Poly, std::string>> candidates;
  if (opts.roots && !opts.roots->empty())
    candidates.emplace_back(Poly::from_roots(*opts.roots), "user-roots");
  for (int d = opts.min_degree; d <= opts.max_degree; ++d) {
    if (static_cast<std::size_t>(d) <= ea.size())
      candidates.emplace_back(Poly::from_roots(leja_points(ea, static_cast<std::size_t>(d))),
                              "leja-A");
  }
  std::vector<cplx> both = ea;
  both.insert(both.end(), eb.begin(), eb.end());
  for (int d = opts.min_degree; d <= opts.max_degree; ++d) {
    if (static_cast<std::size_t>(d) <= both.size())
      candidates.emplace_back(Poly::from_roots(leja_points(both, static_cast<std::size_t>(d))),
                              "leja-A+B");
  }
  cplx centroid = 0.0;
  for (const auto& z : ea) centroid += z;
  centroid /= static_cast<double>(ea.size());
  for (int d = opts.min_degree; d <= opts.max_degree; ++d) {
    candidates.emplace_back(
        Poly::from_roots(std::vector<cplx>(static_cast<std::size_t>(d), centroid)),
        "shifted-power");
    // z^d - s with s at the middle of the image of sigma(A) under z^d.
    std::vector<cplx> img;
    for (const auto& z : ea) img.push_back(std::pow(z, d));
    const GridBox ib = box_around(img, 0.0);
    const cplx s = 0.5 * (ib.lower + ib.upper);
    Poly q = Poly::monomial(d) - Poly::constant(s);
    candidates.emplace_back(q, "shifted-monomial");
  }

  SearchResult best;
  bool have = false;
  for (auto& [p, strategy] : candidates) {
    SeparationCertificate cert = separation_certificate(p, a, b, c, opts.separation);
    ++best.tried;
    if (cert.status == SeparationStatus::Separated) {
      best.p = p;
      best.strategy = strategy;
      best.certificate = std::move(cert);
      return best;
    }
    if (!have || cert.score > best.certificate.score) {
      best.p = p;
      best.strategy = strategy;
      best.certificate = std::move(cert);
      have = true;
    }
  }
  return best;
}

}  // namespace polysep

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polysep/kernels.hpp"
#include "polysep/matcore.hpp"
#include "polysep/multicentric.hpp"
#include "polysep/polyops.hpp"

namespace polysep {

/// Lower-left and upper-right corners.
struct GridBox {
  cplx lower;
  cplx upper;
};

enum class GridKind { Lemniscate, Pseudospectrum };

/**
 * Sampled inclusion set on a rectangular grid.
 *
 * values[k] is |p(z)| or sigma_min(z - T) at the center of cell k
 * (k = iy * nx + ix). floor[k] bounds the same function from below on the
 * disc circumscribing the cell, and mask[k] = floor[k] <= level, so the mask
 * covers every cell that meets the true set. labels[k] is the 4-connected
 * component of a mask cell and -1 outside the mask.
 */
struct GridRegion {
  GridKind kind = GridKind::Lemniscate;
  GridBox box;
  std::size_t nx = 0;
  std::size_t ny = 0;
  double level = 0.0;
  std::vector<double> values;
  std::vector<double> floor;
  std::vector<std::uint8_t> mask;
  std::vector<int> labels;
  int components = 0;

  kernels::GridSpec spec() const { return {box.lower, box.upper, nx, ny}; }
  cplx center(std::size_t ix, std::size_t iy) const { return spec().center(ix, iy); }
  double cell_diagonal() const;
  /// Cell containing z, nullopt outside the box.
  std::optional<std::size_t> cell_of(cplx z) const;
  bool contains(cplx z) const;
  /// Component label at z, -1 outside the mask or the box.
  int component_of(cplx z) const;
  /// z's cell and its eight neighbours are all in the same component.
  bool interior(cplx z) const;
  /// z's cell and its eight neighbours are all outside the mask.
  bool exterior(cplx z) const;
  bool touches_border() const;

  struct Bounds {
    cplx lower;
    cplx upper;
    std::size_t cells = 0;
  };
  /// Cell-edge bounding box of every component.
  std::vector<Bounds> component_bounds() const;
};

/// Re-thresholds the stored values at a new level and relabels.
GridRegion with_level(const GridRegion& g, double level);
/// Recomputes mask and labels from floor and level.
void label_components(GridRegion& g);
/// Fills bounded holes of the mask (grid approximation of the polynomially convex hull).
GridRegion fill_holes(const GridRegion& g);

/// Square around all eigenvalues of A and B, inflated by 0.5 (|A| + |B|).
GridBox default_box(const CMatrix& a, const CMatrix& b);
/// Square around the points, inflated by pad (at least a small positive width).
GridBox box_around(std::span<const cplx> points, double pad);

inline constexpr std::size_t kDefaultResolution = 256;

GridRegion vp_grid(const Poly& p, double level, const GridBox& box,
                   std::size_t resolution = kDefaultResolution,
                   kernels::Exec exec = kernels::Exec::Parallel);
GridRegion pseudospectrum_grid(const CMatrix& t, double eps, const GridBox& box,
                               std::size_t resolution = kDefaultResolution,
                               kernels::Exec exec = kernels::Exec::Parallel);

/// Portable graymap (P2) of log10 of the cell values, quantized to 0..255.
std::string to_pgm(const GridRegion& g);
/// One line per grid row, comma separated cell values.
std::string to_csv(const GridRegion& g);

enum class SeparationStatus { Separated, NotSeparated, Inconclusive };
std::string to_string(SeparationStatus s);

enum class SeparationKind {
  /// V_p(M) at level |p(M)| + t splits sigma(A) from sigma(B) into different components.
  Components,
  /// sigma(B) lies outside V_p(A) at level |p(A)| + t (the disc-series condition).
  Disc,
};
std::string to_string(SeparationKind k);

struct SeparationOptions {
  SeparationKind kind = SeparationKind::Components;
  /// Margin t; negative selects 0.05 * |p(M)| (or |p(A)| for the disc kind).
  double margin = -1.0;
  std::optional<GridBox> box;
  std::size_t resolution = kDefaultResolution;
  /// Use A (+) B instead of the block triangular M.
  bool block_diagonal = false;
  /// Doublings of the box allowed while the mask touches the border.
  int max_expansions = 4;
};

struct SeparationCertificate {
  Poly p;
  SeparationKind kind = SeparationKind::Components;
  double norm = 0.0;   ///< |p(M)|, or |p(A)| for the disc kind
  double margin = 0.0; ///< t
  double level = 0.0;  ///< norm + t
  std::vector<cplx> eig_a;
  std::vector<cplx> eig_b;
  std::vector<int> component_a;
  std::vector<int> component_b;
  std::vector<cplx> roots;
  std::vector<int> component_roots;
  SeparationStatus status = SeparationStatus::Inconclusive;
  /// Relative margin: positive when separated, at most 0 when the sets merge.
  double score = 0.0;
  std::string cause;
  GridRegion region;
};

/**
 * Grid certificate that p separates sigma(A) from sigma(B).
 *
 * Components kind: separated when no component holds eigenvalues of both A
 * and B and every eigenvalue cell is interior to its component. The score is
 * (merge level - level) / level, where merge level is the smallest level at
 * which some A-eigenvalue and some B-eigenvalue are joined by a grid path.
 */
SeparationCertificate separation_certificate(const Poly& p, const CMatrix& a, const CMatrix& b,
                                             const CMatrix& c,
                                             const SeparationOptions& opts = {});

/// +1 for roots in a component with A-eigenvalues, -1 with B-eigenvalues,
/// +1 otherwise. Throws CertificateError for a root outside any component interior.
std::vector<int> root_signs(const SeparationCertificate& cert);

struct SignedCircle {
  Circle circle;
  int sign = 1;
};

/// One circle per component (half-diagonal of its bounding box plus pad_cells
/// cell diagonals); overlapping circles of equal sign are merged into an
/// enclosing circle. Throws CertificateError when circles of opposite sign meet.
std::vector<SignedCircle> component_circles(const GridRegion& g,
                                            std::span<const int> component_sign,
                                            double pad_cells = 1.5);

/// Circles enclosing the level set of a certificate, verified so that
/// |p| > level on `nodes` points of each circle. Throws CertificateError.
std::vector<SignedCircle> level_set_contour(const SeparationCertificate& cert,
                                            std::size_t nodes = 4096);

struct EtaCandidate {
  Poly p;
  std::string origin;
  double norm_pa = 0.0;
  double norm_pb_inv = 0.0;
  double eta = 0.0;            ///< (|p(A)| |p(B)^{-1}|)^{1/d}
  double spectral = 0.0;       ///< rho(p(A)) rho(p(B)^{-1})
};

struct EtaRow {
  int degree = 0;
  double best = 0.0;
  double running_min = 0.0;
  Poly best_poly;
  std::string best_origin;
  double best_spectral = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

struct EtaEstimate {
  std::vector<EtaRow> rows;
  std::vector<EtaCandidate> candidates;
  /// Candidates dropped because p(B) was singular to working precision.
  std::vector<std::string> skipped;
};

struct EtaOptions {
  int center_grid = 9;
  bool keep_candidates = false;
};

/// Upper estimates of eta(A,B) from Leja-point and shifted-power candidates.
EtaEstimate eta_estimate(const CMatrix& a, const CMatrix& b, int dmax,
                         const EtaOptions& opts = {});

/// Candidate polynomials of one degree, in the order they are evaluated.
std::vector<std::pair<Poly, std::string>> eta_candidates(const CMatrix& a, int degree,
                                                         int center_grid = 9);

struct SearchOptions {
  int min_degree = 1;
  int max_degree = 6;
  std::optional<std::vector<cplx>> roots;
  /// Disc kind by default: low-degree candidates can only separate in that sense.
  SeparationOptions separation = disc_options();

  static SeparationOptions disc_options() {
    SeparationOptions o;
    o.kind = SeparationKind::Disc;
    return o;
  }
};

struct SearchResult {
  Poly p;
  std::string strategy;
  SeparationCertificate certificate;
  std::size_t tried = 0;
};

/// Tries user roots, Leja points on sigma(A), Leja points on sigma(A (+) B)
/// split by real part, and shifted powers (z - c)^d and z^d - s. Returns the
/// first separated candidate, else the best-scoring failure.
SearchResult search_separating_poly(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                                    const SearchOptions& opts = {});

}  // namespace polysep

#pragma once

/* Bergman geometry.
 *
 * The metric is the Hessian form of log K(z,z): for radial weights
 *   beta^2(z, xi) = |xi|^2 (k'/k)(x) + |<z,xi>|^2 (log k)''(x),  x = |z|^2,
 * with the closed-form comparison alpha^2 = |xi|^2 Psi'(x) + |<z,xi>|^2
 * Psi''(x).  In one variable the metric is conformal: beta = |xi| b(|z|)
 * with b the radial unit profile.
 *
 * Distances come in three flavors: quadrature along an explicit curve
 * family (arc + radial + chord, an upper bound), a shortest path on a
 * 16-neighbor grid graph (approximation from above; angular stencil bias
 * is at most kGridStencilBias), and the ellipsoid quasi-distance
 *   dQ(z,w) = |z - P_z w| sqrt(Phi'(x)) + |w - P_z w| sqrt(Psi'(x)),
 * P_z the projection onto the complex line of z.  dQ is not symmetric;
 * lattice construction symmetrizes it by the pointwise max.
 */

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "focklab/moments.hpp"

namespace focklab {

using C = std::complex<double>;
using CVec = std::vector<C>;

// ============================ metric =====================================

struct MetricSample {
  CVec z, xi;
  double beta2 = 0;
  double alpha2 = 0;
  double ratio = 0;  // beta2/alpha2; inf/nan when alpha2 = 0
};

MetricSample metric(const MomentTable& table, const CVec& z, const CVec& xi);

// Polyline length: sum of beta(midpoint, edge) over edges.
double path_length(const MomentTable& table, std::span<const CVec> vertices);

/* Sampled radial profile b(rho) = beta(z, unit xi) at |z| = rho (n = 1),
 * linearly interpolated.  Shared by the grid graph and the lattice
 * generator so hot loops avoid per-point series scans. */
class RadialMetricProfile {
 public:
  RadialMetricProfile(const MomentTable& table, double rho_max,
                      int samples = 1024);
  double beta_unit(double rho) const;
  double rho_max() const { return rho_max_; }

 private:
  double rho_max_;
  std::vector<double> values_;
};

// =========================== distances ===================================

enum class DistanceMethod { segment, grid, ellipsoid };

const char* to_string(DistanceMethod m);
DistanceMethod distance_method_from_string(const std::string& s);

enum class DistanceKind { upper_bound, approximation };

struct DistanceResult {
  double rho_hat = 0;
  DistanceKind kind = DistanceKind::approximation;
  double refine_delta = 0;  // relative change under one refinement halving
};

// Worst-case angular overshoot of the 16-neighbor stencil (~2.4%).
inline constexpr double kGridStencilBias = 0.024;

DistanceResult distance(const MomentTable& table, const CVec& z,
                        const CVec& w, DistanceMethod method);

// Ellipsoid quasi-distance as a plain number (n >= 1).
double quasi_distance(const Weight& w, const CVec& z, const CVec& target);

/* Single-source shortest-path field on a local Cartesian grid (n = 1):
 * covers the metric ball of the given radius around the center. */
struct DistanceField {
  double x0 = 0, y0 = 0, h = 0;
  int nx = 0, ny = 0;
  std::vector<double> dist;  // row-major [iy*nx+ix], inf = unreached

  double at(C w) const;  // bilinear; inf outside the grid
};

DistanceField distance_field(const MomentTable& table, C center,
                             double metric_radius, int resolution = 96);

// ============================ lattices ===================================

struct PsiLattice {
  std::vector<C> points;
  double covering_radius = 0;  // the r the lattice was built for
  double domain_radius = 0;    // Euclidean radius of the candidate disc
  DistanceMethod backend = DistanceMethod::ellipsoid;
  double max_candidate_gap = 0;  // max over candidates of dist to lattice
};

/* Greedy construction on a polar candidate grid of |z| <= R: repeatedly
 * accept the innermost candidate whose symmetrized distance to every
 * accepted point is >= r.  On exit every candidate is within < r of the
 * lattice, so separation and covering hold on the grid by construction. */
PsiLattice build_lattice(const MomentTable& table, double R, double r,
                         DistanceMethod backend = DistanceMethod::ellipsoid);

struct LatticeStats {
  double min_separation = 0;   // over lattice pairs (symmetrized)
  double max_candidate_gap = 0;
  int multiplicity = 0;        // max overlap count of radius-r balls
  int multiplicity_doubled = 0;  // same at radius 2r
};

// Max over probe points of #{k : dist(a_k, probe) < radius}.
int covering_multiplicity(const MomentTable& table, const PsiLattice& lattice,
                          double radius);

LatticeStats lattice_invariants(const MomentTable& table,
                                const PsiLattice& lattice);

// =========================== ball volume =================================

enum class BallSampler { ellipsoid_mc, grid_field };

struct BallVolumeOptions {
  int budget = 100000;
  std::uint64_t seed = 12345;
  BallSampler sampler = BallSampler::ellipsoid_mc;
};

struct BallVolume {
  double measured = 0;
  double std_error = 0;        // binomial, 0 for the grid sampler
  double root_law_estimate = 0;  // [Phi'(x)]^{-1/2} [Psi'(x)]^{(n-1)/2}
  double cell_law_estimate = 0;  // [Phi'(x)]^{-1}   [Psi'(x)]^{-(n-1)}
  long long inside = 0;
  long long budget = 0;
};

/* Euclidean volume of {w : dist(z, w) < r}.  The Monte-Carlo sampler draws
 * uniformly from a product of discs bounding the model ellipsoid D(z, 2.5r)
 * and tests membership with the quasi-distance from the center; the grid
 * sampler counts cells of a shortest-path field (n = 1 only).  Both
 * candidate closed-form estimates are reported, neither is asserted. */
BallVolume ball_volume(const MomentTable& table, const CVec& z, double r,
                       const BallVolumeOptions& opt = {});

}  // namespace focklab

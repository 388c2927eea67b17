#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"

#include "focklab/geometry.hpp"
#include "focklab/kernel.hpp"
#include "focklab/moments.hpp"
#include "focklab/numerics.hpp"
#include "focklab/weights.hpp"

using namespace focklab;

namespace {

MomentTable table_for(const char* key, int n, double r_needed) {
  const Weight w = parse_weight(key);
  return build_moment_table(w, n, required_dmax(w, r_needed),
                            MomentMethod::quadrature);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("linear-weight metric is Euclidean") {
  const MomentTable t1 = table_for("linear:a=1", 1, 40.0);
  for (double s : {0.0, 1.0, 5.0}) {
    const MetricSample ms = metric(t1, {C(s, 0.3)}, {C(0.4, -1.1)});
    // curvature vanishes and k'/k = 1, so beta^2 = |xi|^2 exactly.
    CHECK(ms.beta2 == doctest::Approx(0.4 * 0.4 + 1.1 * 1.1).epsilon(1e-9));
    CHECK(ms.ratio == doctest::Approx(1.0).epsilon(1e-9));
  }
  const MomentTable t2 = table_for("linear:a=1", 2, 40.0);
  const MetricSample ms2 =
      metric(t2, {C(1.0, 0.0), C(0.5, 0.5)}, {C(0.0, 1.0), C(2.0, 0.0)});
  CHECK(ms2.beta2 == doctest::Approx(1.0 + 4.0).epsilon(1e-9));

  CHECK_THROWS_AS((void)metric(t1, {C(0, 0)}, {C(1, 0), C(0, 0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)metric(t1, {C(0, 0)}, {C(0, 0)}), std::domain_error);
}

TEST_CASE("gaussian-type metric approaches the weight comparison form") {
  const MomentTable t = table_for("monomial:p=2", 1, 120.0);
  const MetricSample ms = metric(t, {C(10.0, 0.0)}, {C(1.0, 0.0)});
  // radial direction at x = 100: beta^2/alpha^2 -> 1 with O(1/x) defect
  CHECK(ms.alpha2 == doctest::Approx(2.0 * 100.0 + 100.0 * 2.0));
  CHECK(ms.ratio == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("radial profile and path length reduce to arc length") {
  const MomentTable t = table_for("linear:a=1", 1, 40.0);
  const RadialMetricProfile prof(t, 5.0);
  for (double rho : {0.2, 1.7, 4.9}) {
    CHECK(prof.beta_unit(rho) == doctest::Approx(1.0).epsilon(1e-6));
  }
  const std::vector<CVec> poly = {{C(0, 0)}, {C(1, 1)}, {C(2, 0)}};
  CHECK(path_length(t, poly) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("three distance backends agree for the flat case") {
  // The grid backend samples its radial profile out to ~1.8x the bounding
  // radius, so the table has to cover x well past |w|^2.
  const MomentTable t = table_for("linear:a=1", 1, 100.0);
  const CVec z = {C(0.5, 0.0)}, w = {C(2.5, 1.0)};
  const double euclid = std::abs(C(2.0, 1.0));

  const DistanceResult seg = distance(t, z, w, DistanceMethod::segment);
  CHECK(seg.kind == DistanceKind::upper_bound);
  CHECK(seg.rho_hat >= euclid * (1.0 - 1e-9));
  CHECK(seg.rho_hat <= euclid * 1.05);

  const DistanceResult grid = distance(t, z, w, DistanceMethod::grid);
  CHECK(grid.rho_hat >= euclid * (1.0 - 1e-9));
  CHECK(grid.rho_hat <= euclid * (1.0 + kGridStencilBias) + 1e-6);
  CHECK(grid.refine_delta < 0.02);

  const DistanceResult ell = distance(t, z, w, DistanceMethod::ellipsoid);
  CHECK(ell.rho_hat >= euclid * (1.0 - 1e-9));
  CHECK(ell.rho_hat <= euclid * std::sqrt(2.0) * (1.0 + 1e-9));

  // grid distance is symmetric up to discretization
  const DistanceResult back = distance(t, w, z, DistanceMethod::grid);
  CHECK(back.rho_hat == doctest::Approx(grid.rho_hat).epsilon(0.05));

  CHECK_THROWS_AS((void)distance(t, z, {C(0, 0), C(1, 0)},
                                 DistanceMethod::grid),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)distance_method_from_string("warp"),
                  std::invalid_argument);
}

TEST_CASE("quasi distance matches the flat distance on a real ray") {
  const Weight lin = parse_weight("linear:a=1");
  CHECK(quasi_distance(lin, {C(1.0, 0.0)}, {C(3.5, 0.0)}) ==
        doctest::Approx(2.5).epsilon(1e-12));
  // not symmetric in general: compare both orders for a curved weight
  const Weight p2 = parse_weight("monomial:p=2");
  const double ab = quasi_distance(p2, {C(2.0, 0.0)}, {C(3.0, 0.0)});
  const double ba = quasi_distance(p2, {C(3.0, 0.0)}, {C(2.0, 0.0)});
  CHECK(ab > 0.0);
  CHECK(ba > 0.0);
  CHECK(ab != ba);
}

TEST_CASE("distance field interpolates from the source") {
  const MomentTable t = table_for("linear:a=1", 1, 100.0);
  const DistanceField f = distance_field(t, C(1.0, 0.0), 2.0);
  CHECK(f.at(C(1.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-6));
  const double d = f.at(C(2.0, 0.5));
  CHECK(d >= std::abs(C(1.0, 0.5)) * (1.0 - 1e-6));
  CHECK(d <= std::abs(C(1.0, 0.5)) * (1.0 + kGridStencilBias) + 0.05);
  CHECK(std::isinf(f.at(C(50.0, 0.0))));
}

TEST_CASE("greedy lattice satisfies separation, covering, multiplicity") {
  const MomentTable t = table_for("linear:a=1", 1, 30.0);
  const PsiLattice lat = build_lattice(t, 3.0, 0.8);
  REQUIRE(lat.points.size() > 3);
  const LatticeStats stats = lattice_invariants(t, lat);
  CHECK(stats.min_separation >= 0.8 * (1.0 - 1e-12));
  CHECK(stats.max_candidate_gap < 0.8);
  CHECK(stats.multiplicity >= 1);
  CHECK(stats.multiplicity <= 10);
  CHECK(stats.multiplicity_doubled >= stats.multiplicity);
  CHECK(covering_multiplicity(t, lat, 0.8) == stats.multiplicity);

  const PsiLattice lat_g = build_lattice(t, 2.0, 0.7, DistanceMethod::grid);
  const LatticeStats stats_g = lattice_invariants(t, lat_g);
  CHECK(stats_g.min_separation >= 0.7 * 0.999);

  CHECK_THROWS_AS((void)build_lattice(t, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)build_lattice(t, 2.0, 0.5, DistanceMethod::segment),
                  std::invalid_argument);
}

TEST_CASE("flat ball volume is pi r^2") {
  const MomentTable t = table_for("linear:a=1", 1, 60.0);
  BallVolumeOptions opt;
  opt.budget = 60000;
  const BallVolume mc = ball_volume(t, {C(1.0, 0.0)}, 1.0, opt);
  CHECK(mc.inside > 0);
  CHECK(mc.measured == doctest::Approx(kPi).epsilon(0.05));
  CHECK(mc.std_error < 0.05);
  CHECK(mc.root_law_estimate == doctest::Approx(1.0));
  CHECK(mc.cell_law_estimate == doctest::Approx(1.0));

  BallVolumeOptions gopt;
  gopt.sampler = BallSampler::grid_field;
  const BallVolume gf = ball_volume(t, {C(1.0, 0.0)}, 1.0, gopt);
  CHECK(gf.measured == doctest::Approx(kPi).epsilon(0.08));

  // reproducibility: same seed, same count
  const BallVolume mc2 = ball_volume(t, {C(1.0, 0.0)}, 1.0, opt);
  CHECK(mc2.inside == mc.inside);

  CHECK_THROWS_AS((void)ball_volume(t, {C(1, 0)}, -1.0), std::domain_error);
  const MomentTable tp2 = table_for("monomial:p=2", 1, 10.0);
  CHECK_THROWS_AS((void)ball_volume(tp2, {C(0, 0)}, 0.5), std::domain_error);
}

}  // TEST_SUITE

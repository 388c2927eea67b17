#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "focklab/kernel.hpp"
#include "focklab/numerics.hpp"
#include "focklab/operators.hpp"
#include "focklab/weights.hpp"

using namespace focklab;

namespace {

NormalizedBasis basis_for(const char* key, int d_max) {
  return NormalizedBasis(build_moment_table(parse_weight(key), 1, d_max,
                                            MomentMethod::quadrature));
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("basis norms are pi times the moments") {
  const NormalizedBasis b = basis_for("linear:a=1", 32);
  for (int d : {0, 1, 9}) {
    CHECK(b.log_norm2(d) ==
          doctest::Approx(kLogPi + oracles::log_moment_linear(1.0, d))
              .epsilon(1e-10));
  }
  CHECK_THROWS_AS(NormalizedBasis(build_moment_table(
                      parse_weight("linear:a=1"), 2, 8,
                      MomentMethod::quadrature)),
                  std::invalid_argument);
}

TEST_CASE("diagonal spectrum matches the factorial closed forms") {
  const NormalizedBasis lin = basis_for("linear:a=1", 256);
  const NormalizedBasis lin2 = basis_for("linear:a=2", 256);
  const NormalizedBasis p2 = basis_for("monomial:p=2", 256);
  for (int m : {1, 2, 3}) {
    CAPTURE(m);
    const HankelSpectrum hl = hankel_spectrum(lin, m, 200);
    const HankelSpectrum hl2 = hankel_spectrum(lin2, m, 200);
    const HankelSpectrum hg = hankel_spectrum(p2, m, 200);
    for (int d : {0, 1, 2, 5, 50, 200}) {
      CAPTURE(d);
      CHECK(hl.lambda[std::size_t(d)] ==
            doctest::Approx(oracles::hankel_lambda_linear(1.0, m, d))
                .epsilon(1e-8));
      CHECK(hl2.lambda[std::size_t(d)] ==
            doctest::Approx(oracles::hankel_lambda_linear(2.0, m, d))
                .epsilon(1e-8));
      CHECK(hg.lambda[std::size_t(d)] ==
            doctest::Approx(oracles::hankel_lambda_gaussian(m, d))
                .epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS((void)hankel_spectrum(lin, 0, 10), std::domain_error);
  CHECK_THROWS_AS((void)hankel_spectrum(lin, 1, 256), std::out_of_range);
}

TEST_CASE("tail classification separates the three regimes") {
  const NormalizedBasis lin = basis_for("linear:a=1", 1100);
  const NormalizedBasis p2 = basis_for("monomial:p=2", 1100);

  const HankelSpectrum flat = hankel_spectrum(lin, 1, 1000);
  CHECK(flat.tail == TailClass::flat);
  CHECK(flat.bounded);
  CHECK_FALSE(flat.compact);

  const HankelSpectrum grow = hankel_spectrum(lin, 2, 1000);
  CHECK(grow.tail == TailClass::growing);
  CHECK_FALSE(grow.bounded);

  const HankelSpectrum decay = hankel_spectrum(p2, 1, 1000);
  CHECK(decay.tail == TailClass::decaying);
  CHECK(decay.bounded);
  CHECK(decay.compact);
  // lambda_d ~ 1/(4 sqrt(d/2)) asymptotically; slope -1/2
  CHECK(decay.tail_slope == doctest::Approx(-0.5).epsilon(0.05));
}

TEST_CASE("schatten verdicts straddle the threshold") {
  const NormalizedBasis p2 = basis_for("monomial:p=2", 4100);
  const std::vector<double> ps = {3.0, 4.0, 4.5, 6.0};
  const HankelSpectrum h = hankel_spectrum(p2, 1, 4000, ps);
  REQUIRE(h.schatten.size() == ps.size());
  CHECK_FALSE(h.schatten[0].convergent);  // p = 3
  CHECK_FALSE(h.schatten[1].convergent);  // p = 4 (critical, diverges)
  CHECK(h.schatten[2].convergent);        // p = 4.5
  CHECK(h.schatten[3].convergent);        // p = 6
  CHECK(h.schatten[2].term_slope ==
        doctest::Approx(-4.5 / 4.0).epsilon(0.05));
}

TEST_CASE("dense quadrature Gram oracle confirms the diagonal model") {
  for (const char* key : {"linear:a=1", "monomial:p=2"}) {
    CAPTURE(key);
    const NormalizedBasis b = basis_for(key, 64);
    const DenseHankelOracle oracle = dense_hankel_oracle(b, 1, 8);
    CHECK(oracle.max_offdiag < 1e-7);
    CHECK(oracle.max_diag_mismatch < 1e-7);
    REQUIRE(oracle.lambda_quad.size() == 9);
  }
  const NormalizedBasis lin = basis_for("linear:a=1", 64);
  CHECK_THROWS_AS((void)dense_hankel_oracle(lin, 0, 8), std::invalid_argument);
  CHECK_THROWS_AS((void)dense_hankel_oracle(lin, 1, 100),
                  std::invalid_argument);
}

TEST_CASE("mean oscillation of conj(z) is constant for the flat weight") {
  const NormalizedBasis lin = basis_for("linear:a=1", 300);
  const std::vector<double> grid = linspace(0.0, 6.0, 25);
  const MOProfile mo = mo_profile(lin, 1, grid);
  REQUIRE(mo.mo_squared.size() == grid.size());
  for (double v : mo.mo_squared) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(mo.bmo_finite);
  CHECK_FALSE(mo.vmo);
  CHECK(mo.bmo_sup == doctest::Approx(1.0).epsilon(1e-8));

  // m = 2: MO^2 = 4x + 2 exactly for the linear weight.
  const MOProfile mo2 = mo_profile(lin, 2, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i] * grid[i];
    CHECK(mo2.mo_squared[i] == doctest::Approx(4.0 * x + 2.0).epsilon(1e-8));
  }
  CHECK_FALSE(mo2.bmo_finite);
}

TEST_CASE("bloch profile of monomials against the series metric") {
  const NormalizedBasis lin = basis_for("linear:a=1", 300);
  const std::vector<double> grid = linspace(0.0, 6.0, 25);
  const std::vector<double> z1 = {0.0, 1.0};        // f = z
  const std::vector<double> z2 = {0.0, 0.0, 1.0};   // f = z^2
  const BlochProfile b1 = bloch_seminorm(lin.table(), z1, grid);
  for (double v : b1.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b1.finite);
  CHECK_FALSE(b1.little_bloch);

  const BlochProfile b2 = bloch_seminorm(lin.table(), z2, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(b2.values[i] == doctest::Approx(2.0 * grid[i]).epsilon(1e-8));
  CHECK_FALSE(b2.finite);
}

TEST_CASE("measure moments and their closed forms") {
  const Weight lin = parse_weight("linear:a=1");
  for (int d : {0, 1, 4}) {
    CAPTURE(d);
    CHECK(log_measure_moment(lin, MeasureSpec::lebesgue(), d) ==
          doctest::Approx(oracles::log_moment_linear(1.0, d)).epsilon(1e-8));
    CHECK(log_measure_moment(lin, MeasureSpec::lebesgue(1.0), d) ==
          doctest::Approx(oracles::log_restricted_moment_linear(1.0, d))
              .epsilon(1e-7));
  }
  CHECK_THROWS_AS(
      (void)log_measure_moment(
          lin, MeasureSpec::point_masses("pm", {C(1, 0)}, {1.0}), 0),
      std::invalid_argument);
  CHECK_THROWS_AS((void)MeasureSpec::point_masses("pm", {C(1, 0)}, {1.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("lebesgue measure is the exact reproducing baseline") {
  const NormalizedBasis lin = basis_for("linear:a=1", 300);
  const std::vector<double> grid = linspace(0.0, 5.0, 21);
  const CarlesonReport rep = carleson_test(lin, MeasureSpec::lebesgue(), grid);
  for (double v : rep.condition_ii)
    CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.carleson);
  CHECK(rep.trend == TailClass::flat);
  CHECK(rep.ball_ratios.empty());
  CHECK_THROWS_AS(
      (void)carleson_test(lin, MeasureSpec::lebesgue(), std::vector<double>{}),
      std::invalid_argument);
}

TEST_CASE("toeplitz diagonal entries for a truncated measure") {
  const NormalizedBasis lin = basis_for("linear:a=1", 300);
  const ToeplitzDiag td = toeplitz_diag(lin, MeasureSpec::lebesgue(1.0), 40,
                                        std::vector<double>{2.0});
  REQUIRE(td.entries.size() == 41);
  for (int d : {0, 1, 8, 40}) {
    CAPTURE(d);
    const double expected =
        std::exp(oracles::log_restricted_moment_linear(1.0, d) -
                 oracles::log_moment_linear(1.0, d));
    CHECK(td.entries[std::size_t(d)] ==
          doctest::Approx(expected).epsilon(1e-7));
  }
  // entries fall of factorially; any positive p converges
  REQUIRE(td.schatten.size() == 1);
  CHECK(td.schatten[0].convergent);
  CHECK_THROWS_AS(
      (void)toeplitz_diag(lin, MeasureSpec::point_masses("pm", {C(1, 0)},
                                                         {1.0}),
                          10, {}),
      std::invalid_argument);
}

TEST_CASE("berezin trace of a finite-rank projection") {
  // The trace quadrature runs until the rank-(r-1) integrand has dropped
  // ~50 nats past its peak, so the series window must be certified there.
  const NormalizedBasis lin = basis_for(
      "linear:a=1", required_dmax(parse_weight("linear:a=1"), 80.0) + 8);
  const NormalizedBasis p2 = basis_for(
      "monomial:p=2", required_dmax(parse_weight("monomial:p=2"), 12.0) + 8);
  for (int rank : {0, 1, 2, 3}) {
    CAPTURE(rank);
    CHECK(trace_identity_check(lin, rank).integral ==
          doctest::Approx(double(rank)).epsilon(1e-7));
    CHECK(trace_identity_check(p2, rank).integral ==
          doctest::Approx(double(rank)).epsilon(1e-7));
  }
  CHECK_THROWS_AS((void)trace_identity_check(lin, -1), std::domain_error);
}

TEST_CASE("derivative-integrability verdicts by weight") {
  const NormalizedBasis p2 = basis_for("monomial:p=2", 1024);
  const BesovReport conv = besov_diagnostic(p2.table(), 1, 5.0);
  CHECK(conv.tail_convergent);
  CHECK(conv.integral > 0.0);
  CHECK(conv.tail_slope == doctest::Approx(3.0 - 5.0).epsilon(0.1));
  const BesovReport div = besov_diagnostic(p2.table(), 1, 3.0);
  CHECK_FALSE(div.tail_convergent);

  const NormalizedBasis lin = basis_for("linear:a=1", 1024);
  const BesovReport never = besov_diagnostic(lin.table(), 1, 6.0);
  CHECK_FALSE(never.tail_convergent);
  CHECK_THROWS_AS((void)besov_diagnostic(p2.table(), 0, 3.0),
                  std::domain_error);
  CHECK_THROWS_AS((void)besov_diagnostic(p2.table(), 1, 0.5),
                  std::domain_error);
}

}  // TEST_SUITE

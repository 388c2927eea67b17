#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "focklab/moments.hpp"
#include "focklab/numerics.hpp"
#include "focklab/weights.hpp"

using namespace focklab;

namespace {

std::filesystem::path temp_path(const char* stem) {
  return std::filesystem::temp_directory_path() /
         (std::string(stem) + "-" + std::to_string(::getpid()) + ".mt");
}

}  // namespace

TEST_SUITE("moments") {

TEST_CASE("quadrature matches Gamma-function closed forms") {
  const Weight lin1 = parse_weight("linear:a=1");
  const Weight lin2 = parse_weight("linear:a=2");
  const Weight p2 = parse_weight("monomial:p=2");
  const Weight p4 = parse_weight("monomial:p=4");
  for (int d : {0, 1, 2, 8, 37, 200, 1000}) {
    CAPTURE(d);
    CHECK(log_moment_quadrature(lin1, 1, d) ==
          doctest::Approx(oracles::log_moment_linear(1.0, d)).epsilon(1e-9));
    CHECK(log_moment_quadrature(lin2, 1, d) ==
          doctest::Approx(oracles::log_moment_linear(2.0, d)).epsilon(1e-9));
    CHECK(log_moment_quadrature(p2, 1, d) ==
          doctest::Approx(oracles::log_moment_monomial(2.0, d)).epsilon(1e-9));
    CHECK(log_moment_quadrature(p4, 1, d) ==
          doctest::Approx(oracles::log_moment_monomial(4.0, d)).epsilon(1e-9));
  }
  // Dimension shift: an n=2 table entry d is the n=1 entry d+1.
  CHECK(log_moment_quadrature(p2, 2, 5) ==
        doctest::Approx(oracles::log_moment_monomial(2.0, 6)).epsilon(1e-9));
}

TEST_CASE("achieved-error estimate is reported and small") {
  double err = -1.0;
  (void)log_moment_quadrature(parse_weight("exp"), 1, 50, 1e-10, &err);
  CHECK(err >= 0.0);
  CHECK(err < 1e-8);
}

TEST_CASE("saddle-point route approaches the closed form at large index") {
  const Weight lin = parse_weight("linear:a=1");
  const Weight p2 = parse_weight("monomial:p=2");
  for (int d : {300, 1000, 5000}) {
    CAPTURE(d);
    const double exact = oracles::log_moment_linear(1.0, d);
    CHECK(laplace_log_moment(lin, d) ==
          doctest::Approx(exact).epsilon(1e-6));
    const double exact2 = oracles::log_moment_monomial(2.0, d);
    CHECK(laplace_log_moment(p2, d) ==
          doctest::Approx(exact2).epsilon(1e-5));
  }
  // The raw Laplace error at fixed d is the Stirling defect ~ 1/(12 d).
  const double defect =
      laplace_log_moment(lin, 500) - oracles::log_moment_linear(1.0, 500);
  CHECK(std::abs(defect) < 2.0 / (12.0 * 500.0));
}

TEST_CASE("I(t) ratio diagnostic matches the Stirling series") {
  const LaplaceDiagnostics d = i_ratio(parse_weight("linear:a=1"), 100.0);
  CHECK(d.x_star == doctest::Approx(100.0));
  CHECK(d.ratio == doctest::Approx(oracles::stirling_ratio(100.0)).epsilon(1e-7));
  CHECK(d.i_asymptotic == doctest::Approx(std::sqrt(2.0 * kPi * 100.0)));
}

TEST_CASE("ratio converges to 1 for every catalog weight") {
  for (const char* key : {"linear:a=1", "monomial:p=2", "exp"}) {
    CAPTURE(key);
    const Weight w = parse_weight(key);
    const double dev3 = std::abs(i_ratio(w, 1e3).ratio - 1.0);
    CHECK(dev3 < 0.02);
    CHECK(std::abs(i_ratio(w, 1e2).ratio - 1.0) >= dev3 * 0.5);
  }
}

TEST_CASE("hybrid build cross-validates the two routes") {
  const MomentTable t =
      build_moment_table(parse_weight("monomial:p=2"), 1, 1200,
                         MomentMethod::hybrid);
  CHECK(t.d_max == 1200);
  for (int d : {0, 150, 400, 1200}) {
    CAPTURE(d);
    CHECK(t.log_moment(d) ==
          doctest::Approx(oracles::log_moment_monomial(2.0, d))
              .epsilon(5e-5));
  }
}

TEST_CASE("table save/load round-trips bit-exactly") {
  const MomentTable t =
      build_moment_table(parse_weight("affine:a=1,p=2"), 2, 64,
                         MomentMethod::quadrature);
  const auto path = temp_path("focklab-roundtrip");
  save_moment_table(t, path);
  const MomentTable u = load_moment_table(path);
  std::filesystem::remove(path);

  CHECK(u.weight.key() == t.weight.key());
  CHECK(u.n == t.n);
  CHECK(u.d_max == t.d_max);
  CHECK(u.method == t.method);
  REQUIRE(u.log_s.size() == t.log_s.size());
  for (std::size_t i = 0; i < t.log_s.size(); ++i) {
    CHECK(u.log_s[i] == t.log_s[i]);  // exact, not approximate
  }
}

TEST_CASE("cache wrapper stores and reuses tables") {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("focklab-cache-test-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  const Weight w = parse_weight("linear:a=1");
  const MomentTable a =
      cached_moment_table(w, 1, 32, MomentMethod::quadrature, dir);
  CHECK(std::filesystem::exists(dir));
  CHECK(!std::filesystem::is_empty(dir));
  const MomentTable b =
      cached_moment_table(w, 1, 32, MomentMethod::quadrature, dir);
  REQUIRE(a.log_s.size() == b.log_s.size());
  for (std::size_t i = 0; i < a.log_s.size(); ++i)
    CHECK(a.log_s[i] == b.log_s[i]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bounds and argument validation") {
  const MomentTable t =
      build_moment_table(parse_weight("linear:a=1"), 1, 16,
                         MomentMethod::quadrature);
  CHECK_THROWS_AS((void)t.log_moment(17), std::out_of_range);
  CHECK_THROWS_AS((void)t.log_moment(-1), std::out_of_range);
  CHECK_THROWS_AS((void)log_moment_quadrature(t.weight, 0, 3),
                  std::domain_error);
  CHECK_THROWS_AS((void)laplace_log_moment(t.weight, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)i_ratio(t.weight, -1.0), std::domain_error);
  MomentBuildOptions opt;
  opt.max_entries = 1000;
  CHECK_THROWS_AS((void)build_moment_table(t.weight, 1, 5000,
                                           MomentMethod::hybrid, opt),
                  std::length_error);
  CHECK_THROWS_AS((void)moment_method_from_string("bogus"),
                  std::invalid_argument);
}

}  // TEST_SUITE

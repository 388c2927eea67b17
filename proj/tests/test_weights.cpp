#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "focklab/numerics.hpp"
#include "focklab/weights.hpp"

using namespace focklab;

TEST_SUITE("weights") {

TEST_CASE("catalog entries evaluate their definitions") {
  const Weight lin = parse_weight("linear:a=1.5");
  CHECK(lin.psi(2.0) == doctest::Approx(3.0));
  CHECK(lin.psi1(7.0) == doctest::Approx(1.5));
  CHECK(lin.psi2(7.0) == doctest::Approx(0.0));

  const Weight p2 = parse_weight("monomial:p=2");
  CHECK(p2.psi(3.0) == doctest::Approx(9.0));
  CHECK(p2.psi1(3.0) == doctest::Approx(6.0));
  CHECK(p2.psi2(3.0) == doctest::Approx(2.0));
  CHECK(p2.psi3(3.0) == doctest::Approx(0.0));

  const Weight aff = parse_weight("affine:a=2,p=3");
  CHECK(aff.psi(1.0) == doctest::Approx(3.0));
  CHECK(aff.psi1(1.0) == doctest::Approx(5.0));

  const Weight ex = parse_weight("exp");
  CHECK(ex.psi(0.0) == doctest::Approx(0.0));
  CHECK(ex.psi(1.0) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK(ex.psi3(2.0) == doctest::Approx(std::exp(2.0)));
}

TEST_CASE("every catalog weight satisfies the hypotheses at sample points") {
  for (const char* key : {"linear:a=1", "monomial:p=2", "monomial:p=3",
                          "affine:a=1,p=2", "exp"}) {
    const Weight w = parse_weight(key);
    CAPTURE(key);
    CHECK(w.psi(0.0) == doctest::Approx(0.0));
    for (double x : {0.1, 1.0, 10.0, 100.0}) {
      CHECK(w.psi1(x) > 0.0);
      CHECK(w.psi2(x) >= 0.0);
      CHECK(w.psi3(x) >= 0.0);
    }
  }
}

TEST_CASE("phi helpers match finite differences") {
  const Weight w = parse_weight("affine:a=1,p=3");
  const double x = 2.3, h = 1e-5;
  const double phi_fd = (w.phi(x + h) - w.phi(x - h)) / (2.0 * h);
  CHECK(w.phi1(x) == doctest::Approx(phi_fd).epsilon(1e-6));
  const double phi2_fd = (w.phi1(x + h) - w.phi1(x - h)) / (2.0 * h);
  CHECK(w.phi2(x) == doctest::Approx(phi2_fd).epsilon(1e-5));
}

TEST_CASE("keys round-trip through the parser") {
  for (const char* key : {"linear:a=1", "linear:a=2.5", "monomial:p=2",
                          "affine:a=1,p=2", "exp"}) {
    CHECK(parse_weight(key).key() == key);
    CHECK(parse_weight(parse_weight(key).key()).key() == key);
  }
}

TEST_CASE("invalid catalog requests throw") {
  CHECK_THROWS_AS((void)parse_weight("nope"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_weight("monomial:p=1.5"), std::domain_error);
  CHECK_THROWS_AS((void)parse_weight("linear:a=-1"), std::domain_error);
  CHECK_THROWS_AS((void)parse_weight("linear:a=0"), std::domain_error);
  CHECK_THROWS_AS((void)parse_weight("exp:a=1"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_weight("linear:zz"), std::invalid_argument);
  CHECK_THROWS_AS((void)make_weight("monomial"), std::invalid_argument);
}

TEST_CASE("phi_inverse inverts phi across the catalog") {
  for (const char* key :
       {"linear:a=2", "monomial:p=2", "monomial:p=4", "affine:a=1,p=2",
        "exp"}) {
    const Weight w = parse_weight(key);
    CAPTURE(key);
    for (double t : {0.5, 3.0, 50.0, 4000.0}) {
      const double x = phi_inverse(w, t);
      CHECK(w.phi(x) == doctest::Approx(t).epsilon(1e-9));
    }
  }
}

TEST_CASE("analytic phi inverse agrees with the bisection path") {
  const Weight ex = parse_weight("exp");
  REQUIRE(bool(ex.phi_inverse_analytic));
  for (double t : {1.0, 10.0, 1e4, 1e12}) {
    const double by_solver = [&] {
      Weight w = ex;
      w.phi_inverse_analytic = nullptr;  // force the numeric route
      return phi_inverse(w, t);
    }();
    CHECK(ex.phi_inverse_analytic(t) ==
          doctest::Approx(by_solver).epsilon(1e-9));
  }
}

TEST_CASE("catalog hash is a stable 16-digit hex string") {
  const std::string h = catalog_hash();
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(h == catalog_hash());
}

TEST_CASE("smoothness diagnostics classify the catalog") {
  // Linear: Psi'' = 0, both conditions vacuous.
  const SmoothnessReport lin = check_hypotheses(parse_weight("linear:a=1"));
  CHECK(lin.basic_satisfied);
  CHECK(lin.basic2_satisfied);
  CHECK_FALSE(lin.eta_basic2.has_value());
  CHECK(window_alpha(lin) == doctest::Approx(0.25));

  // Quadratic: Psi'' constant, Psi' ~ 2t, so eta near -1/2; satisfied.
  const SmoothnessReport p2 = check_hypotheses(parse_weight("monomial:p=2"));
  CHECK(p2.basic_satisfied);
  CHECK(p2.basic2_satisfied);
  REQUIRE(p2.eta_basic2.has_value());
  CHECK(*p2.eta_basic2 < 0.5);

  // Exponential: all derivatives comparable, eta -> exactly the boundary
  // behavior t^{-1/2} absorbed; still under 1/2 on the default grid.
  const SmoothnessReport ex = check_hypotheses(parse_weight("exp"));
  CHECK(ex.basic_satisfied);
  CHECK(ex.basic2_satisfied);
}

}  // TEST_SUITE

#pragma once

/* Radial weight catalog.
 *
 * A weight is a growth function x -> Psi(x) on [0, inf) with Psi(0) = 0,
 * Psi' > 0 on (0, inf), Psi'' >= 0 and Psi''' >= 0.  The induced
 * Phi(x) = x Psi'(x) is increasing and convex; its inverse drives the
 * saddle-point analysis used by the moment and kernel modules.
 *
 * Catalog entries and their admissible parameters:
 *   linear    Psi = a x,        a > 0
 *   monomial  Psi = x^p,        p = 1 or p >= 2  (1 < p < 2 has Psi''' < 0)
 *   affine    Psi = a x + x^p,  a > 0, p as monomial
 *   exp       Psi = e^x - 1
 */

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace focklab {

struct Weight {
  std::string name;                      // catalog id
  std::map<std::string, double> params;  // canonical parameter set
  std::string description;

  std::function<double(double)> psi;
  std::function<double(double)> psi1;
  std::function<double(double)> psi2;
  std::function<double(double)> psi3;

  // Analytic Phi inverse when the catalog entry has one (null otherwise).
  std::function<double(double)> phi_inverse_analytic;

  double phi(double x) const { return x * psi1(x); }
  double phi1(double x) const { return psi1(x) + x * psi2(x); }
  double phi2(double x) const { return 2.0 * psi2(x) + x * psi3(x); }

  // Canonical CLI form, e.g. "monomial:p=2", "exp".
  std::string key() const;
};

Weight make_weight(const std::string& name,
                   const std::map<std::string, double>& params = {});

// Parses "linear:a=1", "monomial:p=2", "affine:a=1,p=3", "exp".
Weight parse_weight(const std::string& spec);

// Hash of the catalog grammar; moment-table caches are invalidated when the
// catalog itself changes.
std::string catalog_hash();

// Solves Phi(x) = t for x >= 0 by bracketed bisection with Newton polish.
// Stops at |Phi(x) - t| <= rel_tol * max(1, |t|).
double phi_inverse(const Weight& w, double t, double rel_tol = 1e-12);

struct GridSpec {
  double lo = 1.0;
  double hi = 1e6;
  int points = 200;  // logarithmically spaced
};

/* Asymptotic smoothness diagnostics.  The two conditions under test are
 *   (basic)   Phi''(t) = O(t^{-1/2} [Phi'(t)]^{1+eta})
 *   (basic2)  Psi''(t) = O(t^{-1/2} [Psi'(t)]^{1+eta})
 * for some eta < 1/2.  The minimal workable eta is estimated by fitting
 * log F'' + (1/2) log t against log F' over the top half of a log grid; the
 * condition is vacuous when F'' vanishes identically (slope field empty). */
struct SmoothnessReport {
  std::optional<double> eta_basic;    // nullopt: vacuous, any eta works
  std::optional<double> eta_basic2;
  bool basic_satisfied = false;
  bool basic2_satisfied = false;
  double slope_basic = 0.0;    // raw fitted slope (eta + 1)
  double slope_basic2 = 0.0;
  std::string grid_used;
};

SmoothnessReport check_hypotheses(const Weight& w, const GridSpec& grid = {});

// Window exponent used by the saddle integrals and the Q_x window:
// alpha = (eta + 1/2) / 2, with eta = 0 when the condition is vacuous.
double window_alpha(const SmoothnessReport& rep);

}  // namespace focklab

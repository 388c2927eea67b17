#include "focklab/weights.hpp"

#include <boost/math/special_functions/lambert_w.hpp>

#include <cmath>
#include <cstdio>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "focklab/numerics.hpp"

namespace focklab {

namespace {

std::string format_param(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double require_param(const std::map<std::string, double>& params,
                     const std::string& key, double fallback,
                     bool has_fallback) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (has_fallback) return fallback;
  throw std::invalid_argument("weight parameter missing: " + key);
}

void check_monomial_exponent(double p) {
  if (p < 1.0 || (p > 1.0 && p < 2.0))
    throw std::domain_error(
        "monomial exponent must be 1 or >= 2 (Psi''' >= 0 fails on (1,2)): "
        "got p=" + format_param(p));
}

}  // namespace

std::string Weight::key() const {
  std::ostringstream out;
  out << name;
  bool first = true;
  for (const auto& [k, v] : params) {  // std::map: deterministic order
    out << (first ? ':' : ',') << k << '=' << format_param(v);
    first = false;
  }
  return out.str();
}

Weight make_weight(const std::string& name,
                   const std::map<std::string, double>& params) {
  Weight w;
  w.name = name;
  if (name == "linear") {
    const double a = require_param(params, "a", 1.0, true);
    if (!(a > 0)) throw std::domain_error("linear weight needs a > 0");
    w.params = {{"a", a}};
    w.description = "Psi(x) = a x";
    w.psi = [a](double x) { return a * x; };
    w.psi1 = [a](double) { return a; };
    w.psi2 = [](double) { return 0.0; };
    w.psi3 = [](double) { return 0.0; };
    w.phi_inverse_analytic = [a](double t) { return t / a; };
  } else if (name == "monomial") {
    const double p = require_param(params, "p", 0.0, false);
    check_monomial_exponent(p);
    w.params = {{"p", p}};
    w.description = "Psi(x) = x^p";
    w.psi = [p](double x) { return std::pow(x, p); };
    w.psi1 = [p](double x) { return p * std::pow(x, p - 1.0); };
    w.psi2 = [p](double x) {
      return p == 1.0 ? 0.0 : p * (p - 1.0) * std::pow(x, p - 2.0);
    };
    w.psi3 = [p](double x) {
      return (p == 1.0 || p == 2.0)
                 ? 0.0
                 : p * (p - 1.0) * (p - 2.0) * std::pow(x, p - 3.0);
    };
    // Phi(x) = p x^p
    w.phi_inverse_analytic = [p](double t) { return std::pow(t / p, 1.0 / p); };
  } else if (name == "affine") {
    const double a = require_param(params, "a", 0.0, false);
    const double p = require_param(params, "p", 0.0, false);
    if (!(a > 0)) throw std::domain_error("affine weight needs a > 0");
    check_monomial_exponent(p);
    w.params = {{"a", a}, {"p", p}};
    w.description = "Psi(x) = a x + x^p";
    w.psi = [a, p](double x) { return a * x + std::pow(x, p); };
    w.psi1 = [a, p](double x) { return a + p * std::pow(x, p - 1.0); };
    w.psi2 = [p](double x) {
      return p == 1.0 ? 0.0 : p * (p - 1.0) * std::pow(x, p - 2.0);
    };
    w.psi3 = [p](double x) {
      return (p == 1.0 || p == 2.0)
                 ? 0.0
                 : p * (p - 1.0) * (p - 2.0) * std::pow(x, p - 3.0);
    };
  } else if (name == "exp") {
    if (!params.empty())
      throw std::invalid_argument("exp weight takes no parameters");
    w.description = "Psi(x) = e^x - 1";
    w.psi = [](double x) { return std::expm1(x); };
    w.psi1 = [](double x) { return std::exp(x); };
    w.psi2 = [](double x) { return std::exp(x); };
    w.psi3 = [](double x) { return std::exp(x); };
    // Phi(x) = x e^x, so the inverse is the Lambert W principal branch.
    w.phi_inverse_analytic = [](double t) {
      return t > 0.0 ? boost::math::lambert_w0(t) : 0.0;
    };
  } else {
    throw std::invalid_argument("unknown weight: " + name);
  }
  return w;
}

Weight parse_weight(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::istringstream in(rest);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("bad weight parameter: " + item);
      try {
        params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad weight parameter value: " + item);
      }
    }
    if (params.empty())
      throw std::invalid_argument("empty parameter list in: " + spec);
  }
  return make_weight(name, params);
}

std::string catalog_hash() {
  // Grammar fingerprint: entry names, parameter names, admissibility, and the
  // Psi(0) = 0 normalization.  Bump the leading tag on breaking changes.
  const std::uint64_t h = fnv1a(
      "focklab-catalog-v1|linear:a>0|monomial:p=1|p>=2|affine:a>0,p|exp|psi0=0");
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

double phi_inverse(const Weight& w, double t, double rel_tol) {
  const double phi0 = w.phi(0.0);
  if (!(t >= phi0))
    throw std::domain_error("phi_inverse: t below Phi(0)");
  if (w.phi_inverse_analytic) return w.phi_inverse_analytic(t);
  if (t == phi0) return 0.0;

  const double target_tol = rel_tol * std::max(1.0, std::abs(t));
  double hi = 1.0;
  int guard = 0;
  while (w.phi(hi) < t) {
    hi *= 2.0;
    if (++guard > 1100)
      throw std::runtime_error("phi_inverse: bracket search failed");
  }
  double lo = hi > 1.0 ? hi / 2.0 : 0.0;

  // Bisect to a safe neighborhood, then polish with Newton (Phi' > 0 off 0).
  for (int i = 0; i < 200 && (hi - lo) > 1e-3 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (w.phi(mid) < t ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    const double f = w.phi(x) - t;
    if (std::abs(f) <= target_tol) return x;
    const double df = w.phi1(x);
    double step = df > 0 ? f / df : 0.0;
    double next = x - step;
    if (!(next > lo && next < hi) || step == 0.0)
      next = 0.5 * (lo + hi);  // fall back to bisection inside the bracket
    (w.phi(next) < t ? lo : hi) = next;
    x = next;
  }
  if (std::abs(w.phi(x) - t) <= target_tol) return x;
  throw std::runtime_error("phi_inverse: did not converge");
}

namespace {

// Fits log F''(t) + (1/2) log t against log F'(t) over the top half of the
// points where both derivatives are finite and positive (fast-growing
// weights overflow double well before the nominal grid end); eta is
// (slope - 1).  Returns nullopt when F'' == 0 on the grid.
std::optional<double> fit_eta(const std::vector<double>& grid,
                              const std::function<double(double)>& d1,
                              const std::function<double(double)>& d2,
                              double* slope_out) {
  std::vector<double> u, g;
  for (double t : grid) {
    const double f2 = d2(t);
    const double f1 = d1(t);
    if (!std::isfinite(f1) || !std::isfinite(f2)) continue;
    if (f2 <= 0.0 || f1 <= 0.0) continue;
    u.push_back(std::log(f1));
    g.push_back(std::log(f2) + 0.5 * std::log(t));
  }
  if (u.empty()) {
    *slope_out = std::numeric_limits<double>::quiet_NaN();
    return std::nullopt;
  }
  const std::size_t half = u.size() / 2;
  const LineFit fit =
      fit_line(std::span(u).subspan(half), std::span(g).subspan(half));
  if (!std::isfinite(fit.slope))
    throw std::runtime_error("check_hypotheses: degenerate fit grid");
  *slope_out = fit.slope;
  return fit.slope - 1.0;
}

}  // namespace

SmoothnessReport check_hypotheses(const Weight& w, const GridSpec& grid) {
  if (!(grid.lo > 0) || !(grid.hi > grid.lo) || grid.points < 8)
    throw std::invalid_argument("check_hypotheses: bad grid");
  const std::vector<double> ts = logspace(grid.lo, grid.hi, grid.points);

  SmoothnessReport rep;
  {
    std::ostringstream g;
    g << "log[" << grid.lo << "," << grid.hi << "]x" << grid.points;
    rep.grid_used = g.str();
  }
  rep.eta_basic = fit_eta(
      ts, [&](double t) { return w.phi1(t); },
      [&](double t) { return w.phi2(t); }, &rep.slope_basic);
  rep.eta_basic2 = fit_eta(
      ts, [&](double t) { return w.psi1(t); },
      [&](double t) { return w.psi2(t); }, &rep.slope_basic2);
  rep.basic_satisfied = !rep.eta_basic || *rep.eta_basic < 0.5;
  rep.basic2_satisfied = !rep.eta_basic2 || *rep.eta_basic2 < 0.5;
  return rep;
}

double window_alpha(const SmoothnessReport& rep) {
  const double eta = rep.eta_basic ? *rep.eta_basic : 0.0;
  return (eta + 0.5) / 2.0;
}

}  // namespace focklab

/* focklab: command-line front end for the weighted-space laboratory.
 *
 * Subcommands mirror the library modules: weight validation, moment-table
 * builds, kernel and metric evaluation, distances, lattices, operator
 * diagnostics, and the verification suites.  Every command prints JSON
 * (or CSV with --format csv) to stdout and optionally to --out.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "focklab/config.hpp"
#include "focklab/geometry.hpp"
#include "focklab/kernel.hpp"
#include "focklab/moments.hpp"
#include "focklab/numerics.hpp"
#include "focklab/operators.hpp"
#include "focklab/report.hpp"
#include "focklab/suites.hpp"
#include "focklab/trend.hpp"
#include "focklab/version.hpp"
#include "focklab/weights.hpp"

namespace {

using focklab::C;
using focklab::CVec;
using ordered_json = nlohmann::ordered_json;

struct Common {
  std::string weight = "linear:a=1";
  int n = 1;
  int dmax = -1;  // -1: size from the evaluation point
  std::uint64_t seed = 12345;
  std::string out;
  std::string format = "json";
  std::string cache_dir = ".focklab-cache";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--weight", c.weight,
                  "weight key, e.g. linear:a=1, monomial:p=2, exp");
  cmd->add_option("--n", c.n, "complex dimension")->check(CLI::Range(1, 8));
  cmd->add_option("--dmax", c.dmax, "moment table size override");
  cmd->add_option("--seed", c.seed, "random seed for sampled diagnostics");
  cmd->add_option("--out", c.out, "also write the output to this file");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--cache-dir", c.cache_dir, "moment table cache directory");
}

// "re,im" pairs separated by ';', or a bare real number per component.
CVec parse_cvec(const std::string& s) {
  CVec out;
  std::stringstream parts(s);
  std::string part;
  while (std::getline(parts, part, ';')) {
    double re = 0, im = 0;
    const int got = std::sscanf(part.c_str(), "%lf,%lf", &re, &im);
    if (got < 1)
      throw std::invalid_argument("cannot parse complex component: " + part);
    out.emplace_back(re, im);
  }
  if (out.empty()) throw std::invalid_argument("empty point: " + s);
  return out;
}

std::vector<double> parse_grid(const std::string& s) {
  double lo = 0, hi = 0;
  int count = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 ||
      count < 1)
    throw std::invalid_argument("grid must be lo:hi:count, got " + s);
  return focklab::linspace(lo, hi, count);
}

int bucket_dmax(int need) {
  int b = 1024;
  while (b < need) b *= 2;
  return b;
}

focklab::MomentTable cli_table(const Common& c, double series_arg) {
  const focklab::Weight w = focklab::parse_weight(c.weight);
  const int need = c.dmax > 0
                       ? c.dmax
                       : bucket_dmax(focklab::required_dmax(w, series_arg) + 8);
  return focklab::cached_moment_table(w, c.n, need,
                                      focklab::MomentMethod::quadrature,
                                      c.cache_dir);
}

// ---------------------------- CSV rendering ------------------------------

void csv_scalar(std::ostream& os, const std::string& key,
                const ordered_json& v) {
  os << key << ",";
  if (v.is_string())
    os << v.get<std::string>();
  else
    os << v.dump();
  os << "\n";
}

void csv_render(std::ostream& os, const std::string& prefix,
                const ordered_json& j) {
  for (const auto& [key, v] : j.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (v.is_object()) {
      csv_render(os, path, v);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      os << path;
      for (const auto& [fk, fv] : v.front().items()) os << "," << fk;
      os << "\n";
      for (const auto& row : v) {
        os << path;
        for (const auto& [fk, fv] : row.items()) {
          os << ",";
          if (fv.is_string())
            os << fv.get<std::string>();
          else
            os << fv.dump();
        }
        os << "\n";
      }
    } else if (v.is_array()) {
      os << path;
      for (const auto& e : v) os << "," << e.dump();
      os << "\n";
    } else {
      csv_scalar(os, path, v);
    }
  }
}

int emit(const ordered_json& j, const Common& c) {
  std::string payload;
  if (c.format == "csv") {
    std::ostringstream os;
    csv_render(os, "", j);
    payload = os.str();
  } else {
    payload = j.dump(2) + "\n";
  }
  std::cout << payload;
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw std::runtime_error("cannot open " + c.out);
    f << payload;
  }
  return 0;
}

ordered_json tool_header(const Common& c) {
  ordered_json j;
  j["tool"] = "focklab";
  j["version"] = focklab::kVersion;
  j["weight"] = focklab::parse_weight(c.weight).key();
  return j;
}

// ----------------------------- subcommands -------------------------------

int cmd_weight_validate(const Common& c) {
  const focklab::Weight w = focklab::parse_weight(c.weight);
  ordered_json j = tool_header(c);
  j["description"] = w.description;
  j["psiAtZero"] = w.psi(0.0);

  // Sign probes for the admissibility hypotheses on a log grid.
  double min1 = INFINITY, min2 = INFINITY, min3 = INFINITY;
  for (double x : focklab::logspace(1e-3, 1e3, 61)) {
    min1 = std::min(min1, w.psi1(x));
    min2 = std::min(min2, w.psi2(x));
    min3 = std::min(min3, w.psi3(x));
  }
  j["derivativeProbes"] = {{"minPsi1", min1},
                           {"minPsi2", min2},
                           {"minPsi3", min3},
                           {"admissible", min1 > 0 && min2 >= 0 && min3 >= 0}};

  const focklab::SmoothnessReport rep = focklab::check_hypotheses(w);
  ordered_json s;
  s["etaBasic"] = rep.eta_basic ? ordered_json(*rep.eta_basic)
                                : ordered_json(nullptr);
  s["etaBasic2"] = rep.eta_basic2 ? ordered_json(*rep.eta_basic2)
                                  : ordered_json(nullptr);
  s["basicSatisfied"] = rep.basic_satisfied;
  s["basic2Satisfied"] = rep.basic2_satisfied;
  s["slopeBasic"] = rep.slope_basic;
  s["slopeBasic2"] = rep.slope_basic2;
  s["grid"] = rep.grid_used;
  s["windowAlpha"] = focklab::window_alpha(rep);
  j["smoothness"] = s;
  return emit(j, c);
}

int cmd_moments_build(const Common& c, const std::string& method_s) {
  const focklab::Weight w = focklab::parse_weight(c.weight);
  const focklab::MomentMethod method =
      focklab::moment_method_from_string(method_s);
  const int dmax = c.dmax > 0 ? c.dmax : 256;

  focklab::MomentTable t;
  if (!c.out.empty()) {
    t = focklab::build_moment_table(w, c.n, dmax, method);
    focklab::save_moment_table(t, c.out);
  } else {
    t = focklab::cached_moment_table(w, c.n, dmax, method, c.cache_dir);
  }

  ordered_json j = tool_header(c);
  j["n"] = t.n;
  j["dMax"] = t.d_max;
  j["method"] = focklab::to_string(t.method);
  j["logMomentFirst"] = t.log_moment(0);
  j["logMomentLast"] = t.log_moment(t.d_max);
  double err = 0;
  for (double e : t.err_est) err = std::max(err, e);
  j["maxErrEstimate"] = err;
  j["written"] = c.out.empty() ? "(cache)" : c.out;
  // The table itself went to --out; the summary goes to stdout only.
  Common stdout_only = c;
  stdout_only.out.clear();
  return emit(j, stdout_only);
}

int cmd_kernel_eval(const Common& c, double r, double theta) {
  const focklab::MomentTable t = cli_table(c, r);
  const focklab::ScaledKernelValue v = focklab::eval_kernel_scaled(t, r, theta);
  ordered_json j = tool_header(c);
  j["n"] = c.n;
  j["r"] = r;
  j["theta"] = theta;
  j["logModulus"] = v.log_modulus;
  j["phase"] = v.phase;
  j["sigma"] = v.sigma;
  j["scaledRe"] = v.scaled_value().real();
  j["scaledIm"] = v.scaled_value().imag();
  j["termsUsed"] = v.terms_used;
  j["window"] = {{"dLo", v.d_lo}, {"dHi", v.d_hi}};
  if (theta == 0.0) {
    const focklab::LogDerivatives ld = focklab::log_derivatives(t, r);
    j["derivatives"] = {{"kpOverK", ld.kp_over_k},
                        {"curvature", ld.curvature},
                        {"meanIndex", ld.mean_index},
                        {"varIndex", ld.var_index}};
  }
  return emit(j, c);
}

int cmd_metric_eval(Common c, const std::string& z_s, const std::string& xi_s) {
  const CVec z = parse_cvec(z_s);
  const CVec xi = parse_cvec(xi_s);
  c.n = int(z.size());
  double x = 0;
  for (const C& zi : z) x += std::norm(zi);
  const focklab::MomentTable t = cli_table(c, x);
  const focklab::MetricSample ms = focklab::metric(t, z, xi);
  ordered_json j = tool_header(c);
  j["n"] = c.n;
  j["zNorm2"] = x;
  j["beta2"] = ms.beta2;
  j["alpha2"] = ms.alpha2;
  j["ratio"] = ms.ratio;
  return emit(j, c);
}

int cmd_distance(Common c, const std::string& z_s, const std::string& w_s,
                 const std::string& method_s) {
  const CVec z = parse_cvec(z_s);
  const CVec w = parse_cvec(w_s);
  c.n = int(z.size());
  double x = 1.0;
  for (const C& p : z) x = std::max(x, std::norm(p));
  for (const C& p : w) x = std::max(x, std::norm(p));
  const focklab::MomentTable t = cli_table(c, 4.0 * x);
  const focklab::DistanceMethod m =
      focklab::distance_method_from_string(method_s);
  const focklab::DistanceResult d = focklab::distance(t, z, w, m);
  ordered_json j = tool_header(c);
  j["method"] = focklab::to_string(m);
  j["rhoHat"] = d.rho_hat;
  j["kind"] = d.kind == focklab::DistanceKind::upper_bound ? "upperBound"
                                                           : "approximation";
  j["refineDelta"] = d.refine_delta;
  return emit(j, c);
}

int cmd_lattice_build(const Common& c, double R, double r,
                      const std::string& method_s) {
  const focklab::MomentTable t = cli_table(c, (R + 2.0) * (R + 2.0));
  const focklab::PsiLattice lat = focklab::build_lattice(
      t, R, r, focklab::distance_method_from_string(method_s));
  const focklab::LatticeStats stats = focklab::lattice_invariants(t, lat);
  ordered_json j = tool_header(c);
  j["R"] = R;
  j["r"] = r;
  j["backend"] = focklab::to_string(lat.backend);
  j["count"] = lat.points.size();
  j["minSeparation"] = stats.min_separation;
  j["maxCandidateGap"] = stats.max_candidate_gap;
  j["multiplicity"] = stats.multiplicity;
  j["multiplicityDoubled"] = stats.multiplicity_doubled;
  ordered_json pts = ordered_json::array();
  for (const C& p : lat.points)
    pts.push_back({{"re", p.real()}, {"im", p.imag()}});
  j["points"] = pts;
  return emit(j, c);
}

int cmd_hankel_spectrum(const Common& c, int m, int dmax,
                        const std::vector<double>& ps) {
  const focklab::NormalizedBasis basis(focklab::cached_moment_table(
      focklab::parse_weight(c.weight), 1, bucket_dmax(dmax + m + 1),
      focklab::MomentMethod::quadrature, c.cache_dir));
  const focklab::HankelSpectrum h = focklab::hankel_spectrum(basis, m, dmax, ps);
  ordered_json j = tool_header(c);
  j["m"] = m;
  j["dMax"] = dmax;
  j["tail"] = focklab::to_string(h.tail);
  j["tailSlope"] = h.tail_slope;
  j["bounded"] = h.bounded;
  j["compact"] = h.compact;
  ordered_json sv = ordered_json::array();
  for (const focklab::SchattenVerdict& v : h.schatten)
    sv.push_back({{"p", v.p},
                  {"convergent", v.convergent},
                  {"termSlope", v.term_slope},
                  {"doublingRatio", v.doubling_ratio}});
  j["schatten"] = sv;
  j["lambda"] = h.lambda;
  return emit(j, c);
}

int cmd_mo_profile(const Common& c, int m, const std::string& grid_s) {
  const std::vector<double> grid = parse_grid(grid_s);
  const double w_top = *std::max_element(grid.begin(), grid.end());
  const focklab::Weight w = focklab::parse_weight(c.weight);
  const int need = std::max(
      c.dmax > 0 ? c.dmax : 1024,
      focklab::required_dmax(w, w_top * w_top) + m + 8);
  const focklab::NormalizedBasis basis(focklab::cached_moment_table(
      w, 1, bucket_dmax(need), focklab::MomentMethod::quadrature,
      c.cache_dir));
  const focklab::MOProfile mo = focklab::mo_profile(basis, m, grid);
  ordered_json j = tool_header(c);
  j["m"] = m;
  j["bmoSup"] = mo.bmo_sup;
  j["tail"] = focklab::to_string(mo.tail);
  j["bmoFinite"] = mo.bmo_finite;
  j["vmo"] = mo.vmo;
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < mo.w_abs.size(); ++i)
    rows.push_back({{"wAbs", mo.w_abs[i]}, {"moSquared", mo.mo_squared[i]}});
  j["profile"] = rows;
  return emit(j, c);
}

int cmd_carleson(const Common& c, const std::string& grid_s, double cut,
                 bool lattice_measure, double R, double r) {
  const std::vector<double> grid = parse_grid(grid_s);
  const double z_top = *std::max_element(grid.begin(), grid.end());
  const focklab::Weight w = focklab::parse_weight(c.weight);
  const double arg = std::max({z_top * z_top, R * z_top, R * R, 1.0});
  const focklab::NormalizedBasis basis(focklab::cached_moment_table(
      w, 1, bucket_dmax(focklab::required_dmax(w, arg) + 8),
      focklab::MomentMethod::quadrature, c.cache_dir));

  ordered_json j = tool_header(c);
  focklab::CarlesonReport rep;
  if (lattice_measure) {
    const focklab::PsiLattice lat = focklab::build_lattice(basis.table(), R, r);
    std::vector<double> masses(lat.points.size());
    for (std::size_t k = 0; k < lat.points.size(); ++k)
      masses[k] =
          std::exp(-focklab::eval_kernel_scaled(basis.table(),
                                                std::norm(lat.points[k]), 0.0)
                        .log_modulus);
    rep = focklab::carleson_test(
        basis,
        focklab::MeasureSpec::point_masses("lattice-normalized", lat.points,
                                           masses),
        grid, &lat);
    j["latticePoints"] = lat.points.size();
  } else {
    rep = focklab::carleson_test(basis, focklab::MeasureSpec::lebesgue(cut),
                                 grid);
  }
  j["measure"] = rep.measure;
  j["supConditionII"] = rep.sup_ii;
  j["trend"] = focklab::to_string(rep.trend);
  j["carleson"] = rep.carleson;
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < rep.z_abs.size(); ++i)
    rows.push_back(
        {{"zAbs", rep.z_abs[i]}, {"conditionII", rep.condition_ii[i]}});
  j["profile"] = rows;
  if (!rep.ball_ratios.empty()) {
    j["ballRatioMin"] = rep.ratio_min;
    j["ballRatioMax"] = rep.ratio_max;
  }
  return emit(j, c);
}

int cmd_toeplitz(const Common& c, double cut, int dmax,
                 const std::vector<double>& ps) {
  const focklab::NormalizedBasis basis(focklab::cached_moment_table(
      focklab::parse_weight(c.weight), 1, bucket_dmax(dmax + 1),
      focklab::MomentMethod::quadrature, c.cache_dir));
  const focklab::ToeplitzDiag td =
      focklab::toeplitz_diag(basis, focklab::MeasureSpec::lebesgue(cut), dmax,
                             ps);
  ordered_json j = tool_header(c);
  j["measure"] = td.measure;
  j["dMax"] = dmax;
  ordered_json sv = ordered_json::array();
  for (const focklab::SchattenVerdict& v : td.schatten)
    sv.push_back({{"p", v.p},
                  {"convergent", v.convergent},
                  {"termSlope", v.term_slope},
                  {"doublingRatio", v.doubling_ratio}});
  j["schatten"] = sv;
  j["entries"] = td.entries;
  return emit(j, c);
}

int cmd_besov(const Common& c, int m, double p) {
  const focklab::Weight w = focklab::parse_weight(c.weight);
  const int dmax = c.dmax > 0 ? c.dmax : 1024;
  const focklab::MomentTable t = focklab::cached_moment_table(
      w, 1, bucket_dmax(dmax), focklab::MomentMethod::quadrature, c.cache_dir);
  const focklab::BesovReport b = focklab::besov_diagnostic(t, m, p);
  ordered_json j = tool_header(c);
  j["m"] = m;
  j["p"] = p;
  j["tailSlope"] = b.tail_slope;
  j["tailConvergent"] = b.tail_convergent;
  j["integral"] = b.integral;
  j["tailEstimate"] = b.tail_estimate;
  j["integrationXMax"] = b.integration_x_max;
  return emit(j, c);
}

int cmd_verify(const Common& c, std::vector<std::string> names,
               const std::string& config_path,
               const std::vector<std::string>& sets) {
  focklab::Config cfg;
  if (!config_path.empty()) cfg = focklab::Config::from_file(config_path);
  cfg.set("seed", std::to_string(c.seed));
  cfg.set("cache_dir", c.cache_dir);
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }

  if (names.empty() ||
      (names.size() == 1 && names.front() == "all"))
    names = focklab::suite_catalog();

  const std::vector<focklab::SuiteReport> reports =
      focklab::run_suites(names, cfg);
  bool all_pass = true;
  for (const focklab::SuiteReport& r : reports) {
    const bool p = r.pass();
    all_pass = all_pass && p;
    std::fprintf(stderr, "[%s] %-20s %zu cases, %.0f ms\n",
                 p ? "PASS" : "FAIL", r.suite.c_str(), r.cases.size(),
                 r.wall_ms);
  }

  const std::string base = c.out.empty() ? "focklab-report.json" : c.out;
  const auto written = focklab::emit_report(reports, base);
  for (const auto& pth : written)
    std::fprintf(stderr, "wrote %s\n", pth.string().c_str());

  if (c.format == "csv") {
    for (const focklab::SuiteReport& r : reports)
      std::cout << focklab::render_suite_csv(r);
  } else {
    std::cout << focklab::render_summary_json(reports) << "\n";
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for weighted holomorphic function spaces"};
  app.set_version_flag("--version", focklab::kVersion);
  app.require_subcommand(1);

  Common c;
  std::function<int()> action;

  // weight validate
  auto* weight = app.add_subcommand("weight", "weight catalog operations");
  weight->require_subcommand(1);
  auto* wval = weight->add_subcommand(
      "validate", "check admissibility and smoothness hypotheses");
  add_common(wval, c);
  wval->callback([&] { action = [&] { return cmd_weight_validate(c); }; });

  // moments build
  auto* moments = app.add_subcommand("moments", "moment table operations");
  moments->require_subcommand(1);
  auto* mbuild =
      moments->add_subcommand("build", "build (and cache or save) a table");
  add_common(mbuild, c);
  static std::string method_s = "quadrature";
  mbuild->add_option("--method", method_s, "quadrature|laplace|hybrid");
  mbuild->callback(
      [&] { action = [&] { return cmd_moments_build(c, method_s); }; });

  // kernel eval
  auto* kernel = app.add_subcommand("kernel", "kernel evaluation");
  kernel->require_subcommand(1);
  auto* keval = kernel->add_subcommand("eval", "scaled kernel at (r, theta)");
  add_common(keval, c);
  static double r_arg = 1.0, theta_arg = 0.0;
  keval->add_option("--r", r_arg, "series argument |<z,w>|")->required();
  keval->add_option("--theta", theta_arg, "argument angle");
  keval->callback(
      [&] { action = [&] { return cmd_kernel_eval(c, r_arg, theta_arg); }; });

  // metric eval
  auto* metric = app.add_subcommand("metric", "metric evaluation");
  metric->require_subcommand(1);
  auto* meval = metric->add_subcommand("eval", "metric form at (z, xi)");
  add_common(meval, c);
  static std::string z_s = "1,0", xi_s = "1,0";
  meval->add_option("--z", z_s, "point, re,im[;re,im...]")->required();
  meval->add_option("--xi", xi_s, "direction, same format")->required();
  meval->callback(
      [&] { action = [&] { return cmd_metric_eval(c, z_s, xi_s); }; });

  // distance
  auto* dist = app.add_subcommand("distance", "metric distance between points");
  add_common(dist, c);
  static std::string dz_s = "0,0", dw_s = "1,0", dmethod_s = "grid";
  dist->add_option("--z", dz_s, "first point")->required();
  dist->add_option("--w", dw_s, "second point")->required();
  dist->add_option("--method", dmethod_s, "segment|grid|ellipsoid");
  dist->callback([&] {
    action = [&] { return cmd_distance(c, dz_s, dw_s, dmethod_s); };
  });

  // lattice build
  auto* lattice = app.add_subcommand("lattice", "lattice operations");
  lattice->require_subcommand(1);
  auto* lbuild = lattice->add_subcommand("build", "greedy separated lattice");
  add_common(lbuild, c);
  static double lat_R = 10.0, lat_r = 1.0;
  static std::string lmethod_s = "ellipsoid";
  lbuild->add_option("--R", lat_R, "domain radius")->required();
  lbuild->add_option("--r", lat_r, "separation/covering radius")->required();
  lbuild->add_option("--method", lmethod_s, "segment|grid|ellipsoid");
  lbuild->callback([&] {
    action = [&] { return cmd_lattice_build(c, lat_R, lat_r, lmethod_s); };
  });

  // hankel spectrum
  auto* hankel = app.add_subcommand("hankel", "Hankel operator diagnostics");
  hankel->require_subcommand(1);
  auto* hspec =
      hankel->add_subcommand("spectrum", "diagonal spectrum for conj(z)^m");
  add_common(hspec, c);
  static int h_m = 1, h_dmax = 1000;
  static std::vector<double> h_ps;
  hspec->add_option("--m", h_m, "symbol power")->required();
  hspec->add_option("--spectrum-dmax", h_dmax, "spectrum length");
  hspec->add_option("--schatten", h_ps, "exponents p")->delimiter(',');
  hspec->callback([&] {
    action = [&] { return cmd_hankel_spectrum(c, h_m, h_dmax, h_ps); };
  });

  // mo profile
  auto* mo = app.add_subcommand("mo", "mean oscillation diagnostics");
  mo->require_subcommand(1);
  auto* mop = mo->add_subcommand("profile", "MO^2 profile over |w|");
  add_common(mop, c);
  static int mo_m = 1;
  static std::string mo_grid = "0:8:33";
  mop->add_option("--m", mo_m, "symbol power")->required();
  mop->add_option("--grid", mo_grid, "lo:hi:count over |w|");
  mop->callback(
      [&] { action = [&] { return cmd_mo_profile(c, mo_m, mo_grid); }; });

  // carleson
  auto* car = app.add_subcommand("carleson", "Carleson embedding test");
  add_common(car, c);
  static std::string car_grid = "0:6:50";
  static double car_cut = INFINITY, car_R = 10.0, car_r = 1.0;
  static bool car_lattice = false;
  car->add_option("--grid", car_grid, "lo:hi:count over |z|");
  car->add_option("--cut", car_cut, "Lebesgue support cut in x = |z|^2");
  car->add_flag("--lattice", car_lattice,
                "use normalized lattice point masses instead of Lebesgue");
  car->add_option("--R", car_R, "lattice domain radius");
  car->add_option("--r", car_r, "lattice separation radius");
  car->callback([&] {
    action = [&] {
      return cmd_carleson(c, car_grid, car_cut, car_lattice, car_R, car_r);
    };
  });

  // toeplitz
  auto* toe = app.add_subcommand("toeplitz", "Toeplitz diagonal diagnostics");
  add_common(toe, c);
  static double toe_cut = INFINITY;
  static int toe_dmax = 1000;
  static std::vector<double> toe_ps;
  toe->add_option("--cut", toe_cut, "Lebesgue support cut in x = |z|^2");
  toe->add_option("--entries-dmax", toe_dmax, "number of diagonal entries");
  toe->add_option("--schatten", toe_ps, "exponents p")->delimiter(',');
  toe->callback([&] {
    action = [&] { return cmd_toeplitz(c, toe_cut, toe_dmax, toe_ps); };
  });

  // besov
  auto* bes = app.add_subcommand("besov", "Besov membership diagnostics");
  add_common(bes, c);
  static int bes_m = 1;
  static double bes_p = 2.0;
  bes->add_option("--m", bes_m, "f = z^m");
  bes->add_option("--p", bes_p, "integrability exponent")->required();
  bes->callback([&] { action = [&] { return cmd_besov(c, bes_m, bes_p); }; });

  // verify
  auto* verify =
      app.add_subcommand("verify", "run verification suites and emit reports");
  add_common(verify, c);
  static std::vector<std::string> v_names;
  static std::string v_config;
  static std::vector<std::string> v_sets;
  verify->add_option("suites", v_names, "suite names, or `all`");
  verify->add_option("--config", v_config, "key=value config file");
  verify->add_option("--set", v_sets, "config override key=value")
      ->take_all();
  verify->callback([&] {
    action = [&] { return cmd_verify(c, v_names, v_config, v_sets); };
  });

  CLI11_PARSE(app, argc, argv);

  try {
    return action ? action() : 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

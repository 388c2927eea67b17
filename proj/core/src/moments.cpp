#include "focklab/moments.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "focklab/numerics.hpp"

namespace focklab {

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;

/* log integral_0^inf x^D e^{-Psi(x)} dx for real D >= 0.
 *
 * The log-integrand f(x) = D log x - Psi(x) peaks at x* = PhiInverse(D)
 * with curvature f''(x*) = -Phi'(x*) / x*, so the mass lives in a window of
 * width sigma = sqrt(x* / Phi'(x*)).  We expand the window until the endpoint
 * integrand drops 45 nats below the peak, then integrate the rescaled
 * e^{f(x)-M} with the peak sitting on a panel boundary.
 */
double quad_log_moment_real(const Weight& w, double D, double rel_tol,
                            double* err_out) {
  if (!(D >= 0.0)) throw std::domain_error("moment exponent must be >= 0");

  const double drop = 45.0;  // e^{-45} ~ 3e-20, below double noise at the peak

  if (D == 0.0) {
    // Monotone decreasing integrand, peak value 1 at x = 0.
    double hi = 1.0;
    for (int i = 0; i < 200 && w.psi(hi) < drop; ++i) hi *= 2.0;
    double err = 0.0;
    double q = Quad::integrate([&](double x) { return std::exp(-w.psi(x)); },
                               0.0, hi, 15, rel_tol, &err);
    if (err_out) *err_out = err / q;
    return std::log(q);
  }

  const double xs = phi_inverse(w, D);
  const double sigma = std::sqrt(xs / w.phi1(xs));
  const double M = D * std::log(xs) - w.psi(xs);
  auto flog = [&](double x) { return D * std::log(x) - w.psi(x); };

  double h = 8.0 * sigma;
  double x_hi = xs + h;
  for (int i = 0; i < 200 && flog(x_hi) - M > -drop; ++i) {
    h *= 2.0;
    x_hi = xs + h;
  }
  double x_lo = std::max(xs - 8.0 * sigma, 0.0);
  for (int i = 0; i < 200 && x_lo > 0.0 && flog(x_lo) - M > -drop; ++i) {
    x_lo = std::max(xs - (xs - x_lo) * 2.0, 0.0);
  }

  auto g = [&](double x) {
    return x > 0.0 ? std::exp(flog(x) - M) : 0.0;
  };
  double e1 = 0.0, e2 = 0.0;
  double q1 = Quad::integrate(g, x_lo, xs, 15, rel_tol * 0.5, &e1);
  double q2 = Quad::integrate(g, xs, x_hi, 15, rel_tol * 0.5, &e2);
  double q = q1 + q2;
  if (!(q > 0.0) || !std::isfinite(q))
    throw std::runtime_error("moment quadrature collapsed for weight " +
                             w.key());
  if (err_out) *err_out = (e1 + e2) / q;
  return M + std::log(q);
}

}  // namespace

const char* to_string(MomentMethod m) {
  switch (m) {
    case MomentMethod::quadrature: return "quadrature";
    case MomentMethod::laplace: return "laplace";
    case MomentMethod::hybrid: return "hybrid";
  }
  return "?";
}

MomentMethod moment_method_from_string(const std::string& s) {
  if (s == "quadrature") return MomentMethod::quadrature;
  if (s == "laplace") return MomentMethod::laplace;
  if (s == "hybrid") return MomentMethod::hybrid;
  throw std::invalid_argument("unknown moment method: " + s);
}

double MomentTable::log_moment(int d) const {
  if (d < 0 || d > d_max) {
    std::ostringstream os;
    os << "moment table for " << weight.key() << " (n=" << n
       << ") holds d <= " << d_max << "; requested d=" << d
       << " needs a rebuild with dMax >= " << d;
    throw std::out_of_range(os.str());
  }
  return log_s[std::size_t(d)];
}

double log_moment_quadrature(const Weight& w, int n, int d, double rel_tol,
                             double* err_out) {
  if (n < 1) throw std::domain_error("dimension must be >= 1");
  if (d < 0) throw std::domain_error("moment index must be >= 0");
  return quad_log_moment_real(w, double(d) + double(n - 1), rel_tol, err_out);
}

double laplace_log_moment(const Weight& w, double d) {
  if (!(d > 0.0))
    throw std::domain_error("laplace moment route requires index > 0");
  const double xs = phi_inverse(w, d);
  return d * std::log(xs) - w.psi(xs) +
         0.5 * std::log(2.0 * kPi * xs / w.phi1(xs));
}

LaplaceDiagnostics i_ratio(const Weight& w, double t) {
  if (!(t > 0.0)) throw std::domain_error("i_ratio requires t > 0");
  LaplaceDiagnostics diag;
  diag.t = t;
  diag.x_star = phi_inverse(w, t);
  const double log_s = quad_log_moment_real(w, t, 1e-12, nullptr);
  diag.i_value =
      std::exp(log_s - t * std::log(diag.x_star) + w.psi(diag.x_star));
  diag.i_asymptotic =
      std::sqrt(2.0 * kPi * diag.x_star / w.phi1(diag.x_star));
  diag.ratio = diag.i_value / diag.i_asymptotic;
  return diag;
}

MomentTable build_moment_table(const Weight& w, int n, int d_max,
                               MomentMethod method,
                               const MomentBuildOptions& opt) {
  if (n < 1) throw std::domain_error("dimension must be >= 1");
  if (d_max < 0) throw std::domain_error("dMax must be >= 0");
  const std::size_t entries = std::size_t(d_max) + 1;
  if (entries > opt.max_entries) {
    std::ostringstream os;
    os << "moment table for " << w.key() << " needs " << entries
       << " entries (dMax=" << d_max << "), above the cap of "
       << opt.max_entries << "; raise max_entries if this is intentional";
    throw std::length_error(os.str());
  }

  MomentTable table;
  table.weight = w;
  table.n = n;
  table.d_max = d_max;
  table.method = method;
  table.log_s.resize(entries);
  table.err_est.assign(entries, 0.0);

  auto shifted = [&](std::size_t d) { return double(d) + double(n - 1); };
  auto use_quadrature = [&](std::size_t d) {
    const double D = shifted(d);
    if (D == 0.0) return true;  // saddle route undefined at exponent 0
    switch (method) {
      case MomentMethod::quadrature: return true;
      case MomentMethod::laplace: return false;
      case MomentMethod::hybrid: return D <= double(opt.hybrid_crossover);
    }
    return true;
  };

  bool any_laplace = false;
  for (std::size_t d = 0; d < entries; ++d) {
    if (use_quadrature(d)) {
      double err = 0.0;
      table.log_s[d] =
          quad_log_moment_real(w, shifted(d), opt.quad_rel_tol, &err);
      table.err_est[d] = err;
    } else {
      table.log_s[d] = laplace_log_moment(w, shifted(d));
      any_laplace = true;
    }
  }

  if (any_laplace) {
    // Cross-validate the saddle route against quadrature on a stride of
    // indices; the measured disagreement also seeds err_est in between.
    std::vector<std::size_t> checks;
    const std::size_t stride = std::max<std::size_t>(1, entries / 16);
    for (std::size_t d = 0; d < entries; d += stride)
      if (!use_quadrature(d)) checks.push_back(d);
    if (!use_quadrature(entries - 1) &&
        (checks.empty() || checks.back() != entries - 1))
      checks.push_back(entries - 1);

    std::vector<double> check_err(checks.size());
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const std::size_t d = checks[i];
      const double q = quad_log_moment_real(w, shifted(d), 1e-12, nullptr);
      const double diff =
          std::abs(table.log_s[d] - q) / std::max(1.0, std::abs(q));
      check_err[i] = diff;
      // Only the asymptotic regime is held to the tolerance; the saddle
      // route is known to be loose at small indices.
      if (shifted(d) >= double(opt.hybrid_crossover) &&
          diff > opt.route_disagreement_tol) {
        std::ostringstream os;
        os << "moment routes disagree for " << w.key() << " at d=" << d
           << " (n=" << n << "): relative gap " << diff << " exceeds "
           << opt.route_disagreement_tol;
        throw std::runtime_error(os.str());
      }
    }

    for (std::size_t d = 0; d < entries; ++d) {
      if (use_quadrature(d)) continue;
      auto it = std::lower_bound(checks.begin(), checks.end(), d);
      if (it == checks.begin()) {
        table.err_est[d] = check_err.front();
      } else if (it == checks.end()) {
        table.err_est[d] = check_err.back();
      } else {
        const std::size_t i = std::size_t(it - checks.begin());
        const double x0 = double(checks[i - 1]), x1 = double(checks[i]);
        const double t = (double(d) - x0) / (x1 - x0);
        table.err_est[d] = (1.0 - t) * check_err[i - 1] + t * check_err[i];
      }
    }
  }

  return table;
}

void save_moment_table(const MomentTable& table,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "focklab-moments v1\n";
  out << "weight " << table.weight.key() << "\n";
  out << "n " << table.n << "\n";
  out << "dmax " << table.d_max << "\n";
  out << "method " << to_string(table.method) << "\n";
  out << "columns d log_s err_est\n";
  char buf[128];
  for (std::size_t d = 0; d < table.log_s.size(); ++d) {
    std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g\n", d, table.log_s[d],
                  table.err_est[d]);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

MomentTable load_moment_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "focklab-moments v1")
    throw std::runtime_error(path.string() +
                             ": not a focklab moment table (v1)");

  MomentTable table;
  std::string weight_key;
  for (int i = 0; i < 5; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error(path.string() + ": truncated header");
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "weight") {
      ls >> weight_key;
    } else if (tag == "n") {
      ls >> table.n;
    } else if (tag == "dmax") {
      ls >> table.d_max;
    } else if (tag == "method") {
      std::string name;
      ls >> name;
      table.method = moment_method_from_string(name);
    } else if (tag == "columns") {
      // informational
    } else {
      throw std::runtime_error(path.string() + ": unexpected header line '" +
                               line + "'");
    }
  }
  if (weight_key.empty())
    throw std::runtime_error(path.string() + ": missing weight header");
  table.weight = parse_weight(weight_key);

  const std::size_t entries = std::size_t(table.d_max) + 1;
  table.log_s.resize(entries);
  table.err_est.resize(entries);
  for (std::size_t d = 0; d < entries; ++d) {
    std::size_t idx = 0;
    double ls = 0.0, ee = 0.0;
    if (!(in >> idx >> ls >> ee) || idx != d)
      throw std::runtime_error(path.string() + ": bad record at d=" +
                               std::to_string(d));
    table.log_s[d] = ls;
    table.err_est[d] = ee;
  }
  return table;
}

MomentTable cached_moment_table(const Weight& w, int n, int d_max,
                                MomentMethod method,
                                const std::filesystem::path& cache_dir,
                                const MomentBuildOptions& opt) {
  char name[160];
  std::snprintf(name, sizeof(name), "%s-%016llx-n%d-d%d-%s.mt",
                catalog_hash().c_str(),
                static_cast<unsigned long long>(fnv1a(w.key())), n, d_max,
                to_string(method));
  const std::filesystem::path path = cache_dir / name;

  if (std::filesystem::exists(path)) {
    try {
      MomentTable table = load_moment_table(path);
      if (table.weight.key() == w.key() && table.n == n &&
          table.d_max == d_max && table.method == method)
        return table;
    } catch (const std::exception&) {
      // fall through to rebuild
    }
  }

  MomentTable table = build_moment_table(w, n, d_max, method, opt);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  if (!ec) {
    try {
      // Write-then-rename so concurrent builders never see a torn file.
      std::filesystem::path tmp = path;
      tmp += "." + std::to_string(
                        static_cast<unsigned long long>(::getpid())) +
             ".tmp";
      save_moment_table(table, tmp);
      std::filesystem::rename(tmp, path, ec);
      if (ec) std::filesystem::remove(tmp, ec);
    } catch (const std::exception&) {
      // cache write failures are non-fatal
    }
  }
  return table;
}

}  // namespace focklab

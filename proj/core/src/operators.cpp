#include "focklab/operators.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "focklab/kernel.hpp"
#include "focklab/numerics.hpp"

namespace focklab {

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
using QuadPanel = boost::math::quadrature::gauss_kronrod<double, 15>;

double lambda_at(const MomentTable& t, int m, int d) {
  const double up = t.log_moment(d + m) - t.log_moment(d);
  if (d < m) return std::exp(up);
  const double down = t.log_moment(d) - t.log_moment(d - m);
  return std::exp(up) - std::exp(down);
}

/* sum_d factor(d) t_d(x) with t_d(x) = (x^d/(pi s_d))/k(x): the probability
 * weights of the kernel series at x.  factor is evaluated only inside the
 * series window. */
template <typename F>
double weighted_series_average(const MomentTable& t, double x, F&& factor) {
  if (x == 0.0) return factor(0);
  const ScaledKernelValue v = eval_kernel_scaled(t, x, 0.0);
  const double log_k = v.log_modulus + v.sigma;
  const double log_x = std::log(x);
  double sum = 0.0;
  for (int d = v.d_lo; d <= v.d_hi; ++d)
    sum += factor(d) * std::exp(log_coeff(t, d) + d * log_x - log_k);
  return sum;
}

std::vector<SchattenVerdict> schatten_verdicts(
    std::span<const double> ds, std::span<const double> values,
    std::span<const double> ps, double exponent_scale) {
  std::vector<SchattenVerdict> out;
  std::vector<double> terms(values.size());
  for (double p : ps) {
    for (std::size_t i = 0; i < values.size(); ++i)
      terms[i] = std::pow(values[i], p * exponent_scale);
    const SumReport rep = classify_sum(ds, terms);
    SchattenVerdict v;
    v.p = p;
    v.convergent = rep.convergent;
    v.term_slope = rep.term_slope;
    v.doubling_ratio = rep.doubling_ratio;
    v.log_partial_sum = rep.log_partial_sum;
    out.push_back(v);
  }
  return out;
}

}  // namespace

// ======================== normalized basis ===============================

NormalizedBasis::NormalizedBasis(MomentTable t) : table_(std::move(t)) {
  if (table_.n != 1)
    throw std::invalid_argument(
        "normalized basis requires a dimension-1 moment table");
}

double NormalizedBasis::log_norm2(int d) const {
  return kLogPi + table_.log_moment(d);
}

// ========================== Hankel spectra ===============================

HankelSpectrum hankel_spectrum(const NormalizedBasis& basis, int m, int d_max,
                               std::span<const double> schatten_ps) {
  if (m < 1) throw std::domain_error("hankel symbol degree must be >= 1");
  const MomentTable& t = basis.table();
  if (d_max + m > t.d_max) {
    std::ostringstream os;
    os << "hankel spectrum for m=" << m << ", dMax=" << d_max
       << " needs a moment table with dMax >= " << d_max + m;
    throw std::out_of_range(os.str());
  }

  HankelSpectrum spec;
  spec.m = m;
  spec.lambda.resize(std::size_t(d_max) + 1);
  std::vector<double> ds(spec.lambda.size());
  for (int d = 0; d <= d_max; ++d) {
    spec.lambda[std::size_t(d)] = lambda_at(t, m, d);
    ds[std::size_t(d)] = double(d);
  }

  const TrendReport trend = classify_tail(ds, spec.lambda);
  spec.tail = trend.tail;
  spec.tail_slope = trend.slope;
  spec.bounded = trend.tail != TailClass::growing;
  spec.compact = trend.tail == TailClass::decaying;
  spec.schatten = schatten_verdicts(ds, spec.lambda, schatten_ps, 0.5);
  return spec;
}

DenseHankelOracle dense_hankel_oracle(const NormalizedBasis& basis, int m,
                                      int d_max) {
  if (m < 1 || d_max < 0 || d_max > 64)
    throw std::invalid_argument("dense oracle is sized for m >= 1, dMax <= 64");
  const MomentTable& t = basis.table();
  const Weight& w = t.weight;

  // Angular factor by trapezoid sum: exact for |delta| < n_phi.
  const int n_phi = std::max(64, 4 * (d_max + m) + 8);
  const int delta_max = 2 * (d_max + m) + 2;
  std::vector<std::complex<double>> a_val(std::size_t(2 * delta_max) + 1);
  for (int delta = -delta_max; delta <= delta_max; ++delta) {
    std::complex<double> s(0.0, 0.0);
    for (int j = 0; j < n_phi; ++j)
      s += std::polar(1.0, delta * (2.0 * kPi * j / n_phi));
    a_val[std::size_t(delta + delta_max)] = s * (2.0 * kPi / n_phi);
  }
  auto A = [&](int delta) { return a_val[std::size_t(delta + delta_max)]; };

  // Radial integrals R(q) = ∫ rho^q e^{-Psi(rho²)} drho by composite GK15.
  const int q_max = 2 * (d_max + m) + 1;
  std::vector<double> r_val(std::size_t(q_max) + 1);
  for (int q = 0; q <= q_max; ++q) {
    const double xs = phi_inverse(w, std::max(0.5 * (q - 1), 0.25));
    double rho_star = std::sqrt(std::max(xs, 1e-6));
    auto log_f = [&](double rho) {
      return q * std::log(rho) - w.psi(rho * rho);
    };
    const double peak = log_f(rho_star);
    double rho_hi = rho_star;
    for (int i = 0; i < 400 && log_f(rho_hi) > peak - 46.0; ++i)
      rho_hi *= 1.25;
    auto f = [&](double rho) {
      return rho > 0.0 ? std::exp(log_f(rho)) : 0.0;
    };
    const int panels = 256;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double a = rho_hi * i / panels, b = rho_hi * (i + 1) / panels;
      sum += QuadPanel::integrate(f, a, b, 0);
    }
    r_val[std::size_t(q)] = sum;
  }
  auto R = [&](int q) { return r_val[std::size_t(q)]; };

  // b[d][k] = <z̄^m z^d, z^k>; norms fully numeric.
  const int nd = d_max + 1;
  const auto ndz = static_cast<std::size_t>(nd);
  std::vector<std::vector<std::complex<double>>> b(
      ndz, std::vector<std::complex<double>>(ndz));
  std::vector<double> norm_k(ndz);
  for (int k = 0; k < nd; ++k) {
    norm_k[std::size_t(k)] = std::real(A(0)) * R(2 * k + 1);
    for (int d = 0; d < nd; ++d)
      b[std::size_t(d)][std::size_t(k)] = A(d - m - k) * R(d + m + k + 1);
  }

  DenseHankelOracle oracle;
  oracle.m = m;
  oracle.lambda_quad.resize(std::size_t(nd));
  for (int d = 0; d < nd; ++d) {
    for (int e = 0; e <= d; ++e) {
      std::complex<double> g = A(d - e) * R(d + e + 2 * m + 1);
      for (int k = 0; k < nd; ++k)
        g -= b[std::size_t(d)][std::size_t(k)] *
             std::conj(b[std::size_t(e)][std::size_t(k)]) /
             norm_k[std::size_t(k)];
      if (e == d) {
        oracle.lambda_quad[std::size_t(d)] =
            std::real(g) / norm_k[std::size_t(d)];
      } else {
        const double off = std::abs(g) / std::sqrt(norm_k[std::size_t(d)] *
                                                   norm_k[std::size_t(e)]);
        oracle.max_offdiag = std::max(oracle.max_offdiag, off);
      }
    }
    const double cf = lambda_at(t, m, d);
    const double mis =
        std::abs(oracle.lambda_quad[std::size_t(d)] - cf) / std::max(1.0, cf);
    oracle.max_diag_mismatch = std::max(oracle.max_diag_mismatch, mis);
  }
  return oracle;
}

// ============================ MO / BMO ===================================

MOProfile mo_profile(const NormalizedBasis& basis, int m,
                     std::span<const double> w_abs_grid) {
  if (m < 1) throw std::domain_error("symbol degree must be >= 1");
  const MomentTable& t = basis.table();

  MOProfile prof;
  prof.m = m;
  for (double s : w_abs_grid) {
    const double x = s * s;
    const double mo2 = weighted_series_average(
        t, x, [&](int d) { return lambda_at(t, m, d); });
    prof.w_abs.push_back(s);
    prof.mo_squared.push_back(mo2);
  }
  prof.bmo_sup = *std::max_element(prof.mo_squared.begin(),
                                   prof.mo_squared.end());
  const TrendReport trend = classify_tail(prof.w_abs, prof.mo_squared);
  prof.tail = trend.tail;
  prof.bmo_finite = trend.tail != TailClass::growing;
  prof.vmo = trend.tail == TailClass::decaying;
  return prof;
}

// ============================== Bloch ====================================

BlochProfile bloch_seminorm(const MomentTable& table,
                            std::span<const double> coeffs,
                            std::span<const double> z_abs_grid) {
  if (table.n != 1)
    throw std::invalid_argument("bloch profile requires a dimension-1 table");

  auto f_prime = [&](double s) {
    double v = 0.0, pw = 1.0;
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
      v += double(j) * coeffs[j] * pw;
      pw *= s;
    }
    return v;
  };

  BlochProfile prof;
  for (double s : z_abs_grid) {
    const double x = s * s;
    const LogDerivatives ld = log_derivatives(table, x);
    const double beta = std::sqrt(ld.kp_over_k + x * ld.curvature);
    prof.z_abs.push_back(s);
    prof.values.push_back(std::abs(f_prime(s)) / beta);
  }
  prof.sup = *std::max_element(prof.values.begin(), prof.values.end());
  const TrendReport trend = classify_tail(prof.z_abs, prof.values);
  prof.tail = trend.tail;
  prof.finite = trend.tail != TailClass::growing;
  prof.little_bloch = trend.tail == TailClass::decaying;
  return prof;
}

// ============================ measures ===================================

MeasureSpec MeasureSpec::lebesgue(double x_cut) {
  MeasureSpec spec;
  spec.kind = Kind::lebesgue;
  spec.name = std::isfinite(x_cut)
                  ? "lebesgue|x<=" + std::to_string(x_cut)
                  : "lebesgue";
  spec.x_cut = x_cut;
  return spec;
}

MeasureSpec MeasureSpec::radial(std::string name,
                                std::function<double(double)> g,
                                double x_cut) {
  MeasureSpec spec;
  spec.kind = Kind::radial_density;
  spec.name = std::move(name);
  spec.density = std::move(g);
  spec.x_cut = x_cut;
  return spec;
}

MeasureSpec MeasureSpec::point_masses(std::string name, std::vector<C> pts,
                                      std::vector<double> masses) {
  if (pts.size() != masses.size())
    throw std::invalid_argument("point masses: points/masses size mismatch");
  MeasureSpec spec;
  spec.kind = Kind::point_masses;
  spec.name = std::move(name);
  spec.points = std::move(pts);
  spec.masses = std::move(masses);
  return spec;
}

double log_measure_moment(const Weight& w, const MeasureSpec& spec, double D) {
  if (spec.kind == MeasureSpec::Kind::point_masses)
    throw std::invalid_argument("measure moments need a radial measure");
  auto g = [&](double x) {
    return spec.density ? spec.density(x) : 1.0;
  };
  auto log_h = [&](double x) {
    const double gv = g(x);
    if (!(gv > 0.0)) return -std::numeric_limits<double>::infinity();
    return (D != 0.0 ? D * std::log(x) : 0.0) - w.psi(x) + std::log(gv);
  };

  const bool bounded = std::isfinite(spec.x_cut);
  double scan_hi = spec.x_cut;
  if (!bounded) {
    const double xs = D > 0.0 ? phi_inverse(w, D) : 1.0;
    scan_hi = 8.0 * xs + 16.0;
  }

  // Peak scan over a log grid (the integrand is unimodal for the catalog
  // densities, the scan just has to land near the maximum).
  double xb = scan_hi * 0.5, mb = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 160; ++i) {
    const double x = scan_hi * std::pow(10.0, -12.0 * (1.0 - i / 160.0));
    const double v = log_h(x);
    if (v > mb) {
      mb = v;
      xb = x;
    }
  }
  double hi = scan_hi;
  if (!bounded) {
    double h = std::max(xb, 1.0);
    while (log_h(xb + h) > mb - 46.0 && h < 1e300) h *= 2.0;
    hi = xb + h;
  }

  auto f = [&](double x) {
    const double v = log_h(x) - mb;
    return v > -700.0 ? std::exp(v) : 0.0;
  };
  double q = Quad::integrate(f, 0.0, xb, 15, 1e-11);
  if (hi > xb) q += Quad::integrate(f, xb, hi, 15, 1e-11);
  if (!(q > 0.0))
    throw std::runtime_error("measure moment quadrature collapsed for " +
                             spec.name);
  return mb + std::log(q);
}

// =========================== Carleson ====================================

CarlesonReport carleson_test(const NormalizedBasis& basis,
                             const MeasureSpec& spec,
                             std::span<const double> z_abs_grid,
                             const PsiLattice* lattice) {
  if (z_abs_grid.empty())
    throw std::invalid_argument("carleson test needs a nonempty grid");
  const MomentTable& t = basis.table();
  const Weight& w = t.weight;

  CarlesonReport rep;
  rep.measure = spec.name;

  if (spec.kind == MeasureSpec::Kind::point_masses) {
    for (double s : z_abs_grid) {
      const double x = s * s;
      const ScaledKernelValue dz = eval_kernel_scaled(t, x, 0.0);
      const double log_kzz = dz.log_modulus + dz.sigma;
      double cond = 0.0;
      for (std::size_t k = 0; k < spec.points.size(); ++k) {
        const C a = spec.points[k];
        const double xa = std::norm(a);
        const double r_arg = std::abs(a) * s;
        const ScaledKernelValue off =
            eval_kernel_scaled(t, r_arg, std::arg(a));
        const double log_k_off = off.log_modulus + w.psi(r_arg);
        cond += spec.masses[k] *
                std::exp(2.0 * log_k_off - w.psi(xa) - log_kzz);
      }
      rep.z_abs.push_back(s);
      rep.condition_ii.push_back(cond);
    }
  } else {
    // Termwise radial reduction: cond(z) = sum_d t_d(x) m_d(g)/s_d.
    double x_max = 0.0;
    for (double s : z_abs_grid) x_max = std::max(x_max, s * s);
    int d_star = 0;
    if (x_max > 0.0)
      d_star = eval_kernel_scaled(t, x_max, 0.0).d_hi;
    std::vector<double> factor(std::size_t(d_star) + 1);
    for (int d = 0; d <= d_star; ++d)
      factor[std::size_t(d)] =
          std::exp(log_measure_moment(w, spec, double(d)) - t.log_moment(d));
    for (double s : z_abs_grid) {
      const double x = s * s;
      const double cond = weighted_series_average(
          t, x, [&](int d) { return factor[std::size_t(d)]; });
      rep.z_abs.push_back(s);
      rep.condition_ii.push_back(cond);
    }
  }

  rep.sup_ii =
      *std::max_element(rep.condition_ii.begin(), rep.condition_ii.end());
  const TrendReport trend = classify_tail(rep.z_abs, rep.condition_ii);
  rep.trend = trend.tail;
  rep.carleson = trend.tail != TailClass::growing;

  if (lattice && spec.kind == MeasureSpec::Kind::point_masses) {
    const double r = lattice->covering_radius;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (std::size_t k = 0; k < spec.points.size(); ++k) {
      const C a = spec.points[k];
      const double phi1 = w.phi1(std::norm(a));
      if (!(phi1 > 0.0)) continue;  // model volume degenerate at the origin
      const double sq_a = std::sqrt(phi1);
      double nu_ball = 0.0;
      for (std::size_t j = 0; j < spec.points.size(); ++j) {
        const C c = spec.points[j];
        const double sq_c = std::sqrt(w.phi1(std::norm(c)));
        if (std::abs(a - c) * std::max(sq_a, sq_c) < r)
          nu_ball += spec.masses[j];
      }
      const double ratio = nu_ball * phi1 / (kPi * r * r);
      rep.ball_ratios.push_back(ratio);
      rmin = std::min(rmin, ratio);
      rmax = std::max(rmax, ratio);
    }
    rep.ratio_min = rep.ball_ratios.empty() ? 0.0 : rmin;
    rep.ratio_max = rmax;
  }
  return rep;
}

// ============================ Toeplitz ===================================

ToeplitzDiag toeplitz_diag(const NormalizedBasis& basis,
                           const MeasureSpec& spec, int d_max,
                           std::span<const double> schatten_ps) {
  if (spec.kind == MeasureSpec::Kind::point_masses)
    throw std::invalid_argument(
        "toeplitz diagonal requires a radial measure");
  const MomentTable& t = basis.table();

  ToeplitzDiag diag;
  diag.measure = spec.name;
  diag.entries.resize(std::size_t(d_max) + 1);
  std::vector<double> ds(diag.entries.size());
  for (int d = 0; d <= d_max; ++d) {
    diag.entries[std::size_t(d)] = std::exp(
        log_measure_moment(t.weight, spec, double(d)) - t.log_moment(d));
    ds[std::size_t(d)] = double(d);
  }
  diag.schatten = schatten_verdicts(ds, diag.entries, schatten_ps, 1.0);
  return diag;
}

// ========================= trace identity ================================

TraceCheck trace_identity_check(const NormalizedBasis& basis, int rank) {
  if (rank < 0) throw std::domain_error("rank must be >= 0");
  TraceCheck check;
  check.rank = rank;
  if (rank == 0) {
    check.integral = 0.0;
    return check;
  }
  const MomentTable& t = basis.table();
  const Weight& w = t.weight;

  auto log_partial = [&](double x) {
    LogSumAccumulator acc;
    for (int d = 0; d < rank; ++d) {
      const double term = (d > 0 ? d * std::log(x) : 0.0) - kLogPi -
                          t.log_moment(d);
      acc.add_log(term);
    }
    return acc.log_sum();
  };

  // Berezin transform of the projection times the damped kernel: both
  // factors evaluated through the series, then multiplied.
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    const ScaledKernelValue v = eval_kernel_scaled(t, x, 0.0);
    const double log_k = v.log_modulus + v.sigma;
    const double tilde = std::exp(log_partial(x) - log_k);
    return kPi * tilde * std::exp(v.log_modulus);
  };

  const double d_top = double(rank - 1);
  const double xs = phi_inverse(w, std::max(d_top, 0.5));
  auto decay = [&](double x) { return d_top * std::log(x) - w.psi(x); };
  const double peak = decay(xs);
  double h = std::max(xs, 1.0);
  while (decay(xs + h) > peak - 50.0 && h < 1e300) h *= 2.0;

  double q = Quad::integrate(integrand, 0.0, xs, 15, 1e-10);
  q += Quad::integrate(integrand, xs, xs + h, 15, 1e-10);
  check.integral = q;
  return check;
}

// ============================= Besov =====================================

BesovReport besov_diagnostic(const MomentTable& table, int m, double p,
                             double integration_x_max) {
  if (table.n != 1)
    throw std::invalid_argument("besov diagnostic requires n=1");
  if (m < 1 || !(p >= 1.0))
    throw std::domain_error("besov diagnostic needs m >= 1 and p >= 1");
  const Weight& w = table.weight;

  BesovReport rep;
  rep.m = m;
  rep.p = p;

  // Convergence from the asymptotic integrand (m r^{m-1})^p
  // [Phi'(r²)]^{1-p/2} r, sampled at large r.
  {
    const std::vector<double> rs = logspace(10.0, 1000.0, 41);
    std::vector<double> vals(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const double r = rs[i];
      vals[i] = std::pow(m * std::pow(r, m - 1), p) *
                std::pow(w.phi1(r * r), 1.0 - 0.5 * p) * r;
    }
    rep.tail_slope = fit_loglog_slope(rs, vals);
    rep.tail_convergent = rep.tail_slope < -(1.0 + kSumSlopeMargin);
  }

  // Exact integrand over [0, X], X certified by the table.
  double X = integration_x_max;
  if (!(X > 0.0)) {
    X = phi_inverse(w, std::max(1.0, 0.75 * table.d_max));
    while (X > 1e-6 && required_dmax(w, X) > table.d_max) X *= 0.9;
  }
  rep.integration_x_max = X;

  auto integrand = [&](double x) {
    const ScaledKernelValue v = eval_kernel_scaled(table, x, 0.0);
    const LogDerivatives ld = log_derivatives(table, x);
    const double beta = std::sqrt(ld.kp_over_k + x * ld.curvature);
    const double fp = m * std::pow(x, 0.5 * (m - 1));
    return kPi * std::pow(fp / beta, p) * std::exp(v.log_modulus);
  };
  rep.integral = Quad::integrate(integrand, 0.0, X, 15, 1e-8);

  if (rep.tail_convergent) {
    const double slope_x = 0.5 * (rep.tail_slope - 1.0);
    if (slope_x < -1.0)
      rep.tail_estimate = integrand(X) * X / (-slope_x - 1.0);
  }
  return rep;
}

}  // namespace focklab

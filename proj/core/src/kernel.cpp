#include "focklab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "focklab/numerics.hpp"

namespace focklab {

namespace {

// Terms below max * 1e-18 cannot move a double-precision sum.
constexpr double kLogDrop = 41.446531673892822;

struct TermWindow {
  int d_lo = 0;
  int d_hi = 0;
  double max_log = 0;
};

double log_term(const MomentTable& table, double log_r, int d) {
  return log_coeff(table, d) + double(d) * log_r;
}

/* Locate the contributing index window at series argument r > 0.  log t_d
 * is concave in d (log s_d is convex), so scanning up from the clamped peak
 * guess finds the maximum and the upper cut; the lower side decays
 * monotonically from there. */
TermWindow find_window(const MomentTable& table, double r, double log_r) {
  const int d_max = table.d_max;
  const double peak = table.weight.phi(r);
  const int d0 = peak >= double(d_max) ? d_max : std::max(0, int(peak));

  TermWindow win;
  win.max_log = log_term(table, log_r, d0);
  win.d_hi = d0;
  bool closed = false;
  while (win.d_hi < d_max) {
    const double v = log_term(table, log_r, win.d_hi + 1);
    ++win.d_hi;
    if (v > win.max_log) {
      win.max_log = v;
    } else if (v < win.max_log - kLogDrop) {
      closed = true;
      break;
    }
  }
  if (!closed && log_term(table, log_r, d_max) >= win.max_log - kLogDrop) {
    std::ostringstream os;
    os << "kernel series window at r=" << r << " reaches the table end (dMax="
       << d_max << "); rebuild the moment table with dMax >= "
       << required_dmax(table.weight, r);
    throw std::out_of_range(os.str());
  }

  win.d_lo = d0;
  while (win.d_lo > 0 &&
         log_term(table, log_r, win.d_lo - 1) >= win.max_log - kLogDrop) {
    --win.d_lo;
  }
  return win;
}

}  // namespace

double log_coeff(const MomentTable& table, int d) {
  double v = -table.log_moment(d) - double(table.n) * kLogPi;
  for (int j = 1; j < table.n; ++j) v += std::log(double(d + j));
  v -= std::lgamma(double(table.n));
  return v;
}

int required_dmax(const Weight& w, double r) {
  const double width = std::sqrt(std::max(r * w.phi1(r), 1.0));
  const double d = w.phi(r) + 12.0 * width;
  if (d > 4.5e15) throw std::overflow_error("required dMax exceeds 2^52");
  return int(std::ceil(d)) + 16;
}

ScaledKernelValue eval_kernel_scaled(const MomentTable& table, double r,
                                     double theta) {
  if (!(r >= 0.0)) throw std::domain_error("series argument must be >= 0");
  theta = std::remainder(theta, 2.0 * kPi);
  if (theta <= -kPi) theta += 2.0 * kPi;

  ScaledKernelValue out;
  out.r = r;
  out.theta = theta;
  out.sigma = table.weight.psi(r);

  if (r == 0.0) {
    out.log_modulus = log_coeff(table, 0);
    out.phase = 0.0;
    out.terms_used = 1;
    return out;
  }

  const double log_r = std::log(r);
  const TermWindow win = find_window(table, r, log_r);
  out.d_lo = win.d_lo;
  out.d_hi = win.d_hi;
  out.terms_used = win.d_hi - win.d_lo + 1;

  if (theta == 0.0) {
    // All terms positive: plain scaled accumulation, phase exactly zero.
    double sum = 0.0;
    for (int d = win.d_lo; d <= win.d_hi; ++d)
      sum += std::exp(log_term(table, log_r, d) - win.max_log);
    out.log_modulus = win.max_log + std::log(sum) - out.sigma;
    out.phase = 0.0;
    return out;
  }

  const std::complex<double> rot = std::polar(1.0, theta);
  std::complex<double> phase_d =
      std::polar(1.0, std::remainder(double(win.d_lo) * theta, 2.0 * kPi));
  std::complex<double> sum(0.0, 0.0);
  for (int d = win.d_lo; d <= win.d_hi; ++d) {
    sum += std::exp(log_term(table, log_r, d) - win.max_log) * phase_d;
    if ((d - win.d_lo) % 1024 == 1023) {
      // Re-seed the rotation to cancel accumulated drift.
      phase_d =
          std::polar(1.0, std::remainder(double(d + 1) * theta, 2.0 * kPi));
    } else {
      phase_d *= rot;
    }
  }
  const double mag = std::abs(sum);
  out.log_modulus = (mag > 0.0)
                        ? win.max_log + std::log(mag) - out.sigma
                        : -std::numeric_limits<double>::infinity();
  out.phase = (mag > 0.0) ? std::arg(sum) : 0.0;
  return out;
}

LogDerivatives log_derivatives(const MomentTable& table, double r) {
  if (!(r >= 0.0)) throw std::domain_error("series argument must be >= 0");

  LogDerivatives out;
  if (r == 0.0) {
    if (table.d_max < 2)
      throw std::out_of_range("log_derivatives at r=0 needs dMax >= 2");
    const double c0 = log_coeff(table, 0);
    out.kp_over_k = std::exp(log_coeff(table, 1) - c0);
    out.curvature =
        2.0 * std::exp(log_coeff(table, 2) - c0) - out.kp_over_k * out.kp_over_k;
    out.mean_index = 0.0;
    out.var_index = 0.0;
    return out;
  }

  const double log_r = std::log(r);
  const TermWindow win = find_window(table, r, log_r);

  double t0 = 0.0, s1 = 0.0;
  for (int d = win.d_lo; d <= win.d_hi; ++d) {
    const double w = std::exp(log_term(table, log_r, d) - win.max_log);
    t0 += w;
    s1 += double(d) * w;
  }
  const double mean = s1 / t0;

  double v = 0.0;
  for (int d = win.d_lo; d <= win.d_hi; ++d) {
    const double w = std::exp(log_term(table, log_r, d) - win.max_log);
    const double c = double(d) - mean;
    v += c * c * w;
  }
  const double var = v / t0;

  out.mean_index = mean;
  out.var_index = var;
  out.kp_over_k = mean / r;
  out.curvature = (var - mean) / (r * r);
  return out;
}

KernelEnvelope kernel_envelope(const MomentTable& table, double r) {
  if (!(r > 0.0)) throw std::domain_error("envelope requires r > 0");
  const Weight& w = table.weight;
  const int n = table.n;
  const double phi1 = w.phi1(r);
  const double psi1_pow = std::pow(w.psi1(r), double(n - 1));
  const double pi_n = std::exp(double(n) * kLogPi);

  KernelEnvelope env;
  env.r = r;
  env.theta0 = 1.0 / std::sqrt(r * phi1);
  env.near_bound = phi1 * psi1_pow / pi_n;
  env.far_coeff = std::pow(r, -1.5) / std::sqrt(phi1) * psi1_pow / pi_n;
  return env;
}

EnvelopeReport offdiag_envelope_check(const MomentTable& table,
                                      std::span<const double> r_grid,
                                      std::span<const double> theta_grid) {
  static constexpr double kTheta0Multiples[] = {0.0,  0.02, 0.05, 0.1, 0.5,
                                                1.0,  2.0,  5.0,  10.0, 30.0};
  EnvelopeReport report;
  report.c_near = 0.0;
  report.c_far = 0.0;
  report.lower_ratio_min = std::numeric_limits<double>::infinity();

  for (double r : r_grid) {
    const KernelEnvelope env = kernel_envelope(table, r);
    std::vector<double> thetas(theta_grid.begin(), theta_grid.end());
    for (double f : kTheta0Multiples) thetas.push_back(f * env.theta0);

    for (double theta : thetas) {
      if (std::abs(theta) > kPi) continue;
      const ScaledKernelValue v = eval_kernel_scaled(table, r, theta);
      EnvelopeSample s;
      s.r = r;
      s.theta = theta;
      s.lhs = std::exp(v.log_modulus);
      s.near = std::abs(theta) <= env.theta0;
      s.rhs = s.near ? env.near_bound
                     : env.far_coeff / std::pow(std::abs(theta), 3.0);
      s.ratio = s.lhs / s.rhs;
      report.samples.push_back(s);

      if (s.near) {
        report.c_near = std::max(report.c_near, s.ratio);
        if (std::abs(theta) < 0.1 * env.theta0)
          report.lower_ratio_min =
              std::min(report.lower_ratio_min, s.lhs / env.near_bound);
      } else {
        report.c_far = std::max(report.c_far, s.ratio);
      }
    }
  }
  return report;
}

QxReport qx_profile(const Weight& w, double x,
                    std::span<const double> r_grid) {
  if (!(x > 0.0)) throw std::domain_error("qx_profile requires x > 0");

  QxReport report;
  report.x = x;
  report.alpha = window_alpha(check_hypotheses(w));
  report.phi1 = w.phi1(x * x);
  report.window_radius = std::pow(report.phi1, -report.alpha);

  auto qx = [&](double r) {
    return 0.5 * (w.psi(r * r) + w.psi(x * x)) - w.psi(x * r);
  };

  const double h = report.window_radius;
  report.second_diff = (qx(x + h) + qx(x - h)) / (h * h);  // Q_x(x) = 0
  report.window_ratio = report.second_diff / report.phi1;

  const double c0 = w.psi1(0.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.margins_positive = true;
  for (double r : r_grid) {
    QxRow row;
    row.r = r;
    row.qx = qx(r);
    row.in_window = std::abs(r - x) <= h;
    if (row.in_window) {
      row.bound = nan;
      row.margin = nan;
    } else {
      const double m = std::min(x, r);
      row.bound = 0.25 * c0 * (x - r) * (x - r) +
                  0.25 * std::pow(w.phi1(m * m), 1.0 - 2.0 * report.alpha);
      row.margin = row.qx - row.bound;
      if (!(row.margin > 0.0)) report.margins_positive = false;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace focklab

#pragma once

/* Reproducing kernel evaluation.
 *
 * For a dimension-n table, k_n(zeta) = sum_d c_d zeta^d with
 *   c_d = (d+1)...(d+n-1) / ((n-1)! * pi^n * s_{d+n-1}),
 * so that K(z,w) = k_n(<z,w>) reproduces against the Gaussian-type density
 * e^{-Psi(|z|^2)} dV on C^n.  The pi^n volume factor is folded into c_d;
 * with it, pi * e^{-r} k(r) = 1 identically for the classical linear weight.
 *
 * Series terms t_d = c_d r^d are log-concave in d and peak near d = Phi(r),
 * so evaluation scans a window around the peak and stops once terms fall
 * 1e-18 below the running maximum.  Everything is computed in log space.
 */

#include <complex>
#include <span>
#include <vector>

#include "focklab/moments.hpp"
#include "focklab/weights.hpp"

namespace focklab {

// log c_d for the table's dimension, volume factor included.
double log_coeff(const MomentTable& table, int d);

// Smallest table size that certifies evaluation at series argument r.
int required_dmax(const Weight& w, double r);

struct ScaledKernelValue {
  double r = 0;
  double theta = 0;
  double log_modulus = 0;  // log |e^{-sigma} k(r e^{i theta})|
  double phase = 0;        // in (-pi, pi]; exactly 0 for theta = 0
  double sigma = 0;        // the scaling exponent Psi(r)
  int terms_used = 0;
  int d_lo = 0, d_hi = 0;  // summed index window

  std::complex<double> scaled_value() const {
    return std::polar(std::exp(log_modulus), phase);
  }
};

// e^{-Psi(r)} k(r e^{i theta}); throws std::out_of_range naming the
// required dMax when the table cannot certify the window at r.
ScaledKernelValue eval_kernel_scaled(const MomentTable& table, double r,
                                     double theta);

struct LogDerivatives {
  double kp_over_k = 0;   // k'(r)/k(r)
  double curvature = 0;   // (log k)''(r) = k''/k - (k'/k)^2
  double mean_index = 0;  // E[d] under p_d = c_d r^d / k(r)
  double var_index = 0;   // Var[d], same law
};

/* Logarithmic derivatives via index moments: with p_d as above,
 * k'/k = E[d]/r and (log k)'' = (Var[d] - E[d])/r^2.  The variance is
 * accumulated centered, which keeps the linear-weight cancellation
 * (Poisson law: Var = E exactly) at working precision.  r = 0 uses the
 * first three series coefficients directly. */
LogDerivatives log_derivatives(const MomentTable& table, double r);

struct KernelEnvelope {
  double r = 0;
  double theta0 = 0;      // [r Phi'(r)]^{-1/2}
  double near_bound = 0;  // Phi'(r) [Psi'(r)]^{n-1} / pi^n
  double far_coeff = 0;   // r^{-3/2} [Phi'(r)]^{-1/2} [Psi'(r)]^{n-1} / pi^n
};

KernelEnvelope kernel_envelope(const MomentTable& table, double r);

struct EnvelopeSample {
  double r = 0;
  double theta = 0;
  double lhs = 0;  // |e^{-Psi(r)} k(r e^{i theta})|
  double rhs = 0;  // regime bound at (r, theta)
  double ratio = 0;
  bool near = false;  // |theta| <= theta0(r)
};

struct EnvelopeReport {
  std::vector<EnvelopeSample> samples;
  double c_near = 0;  // max ratio over |theta| <= theta0
  double c_far = 0;   // max ratio over |theta| >  theta0
  double lower_ratio_min = 0;  // min lhs/near_bound over |theta| < 0.1 theta0
};

/* Measures the two-regime envelope: near bound for |theta| <= theta0(r),
 * far bound far_coeff * |theta|^{-3} beyond.  theta_grid is augmented per r
 * with fixed multiples of theta0(r) so both regimes are always sampled. */
EnvelopeReport offdiag_envelope_check(const MomentTable& table,
                                      std::span<const double> r_grid,
                                      std::span<const double> theta_grid);

struct QxRow {
  double r = 0;
  double qx = 0;
  bool in_window = false;
  double bound = 0;   // lower-bound candidate, NaN inside the window
  double margin = 0;  // qx - bound, NaN inside the window
};

struct QxReport {
  double x = 0;
  double alpha = 0;          // window exponent from the weight hypotheses
  double window_radius = 0;  // [Phi'(x^2)]^{-alpha}
  double second_diff = 0;    // central second difference of Q_x at x
  double phi1 = 0;           // Phi'(x^2)
  double window_ratio = 0;   // second_diff / phi1
  std::vector<QxRow> rows;
  bool margins_positive = false;
};

/* Q_x(r) = (Psi(r^2) + Psi(x^2))/2 - Psi(xr) over moduli r: zero at r = x,
 * curvature Phi'(x^2) inside the window |r-x| <= [Phi'(x^2)]^{-alpha}, and
 * outside it at least (Psi'(0)/4)(x-r)^2 + [Phi'(min(x,r)^2)]^{1-2alpha}/4. */
QxReport qx_profile(const Weight& w, double x, std::span<const double> r_grid);

}  // namespace focklab

#pragma once

/* Operator diagnostics for n = 1.
 *
 * The monomial basis e_d = z^d / sqrt(pi s_d) is orthonormal in A²(Ψ).
 * For the conjugate-monomial symbol f̄ = conj(z)^m the Hankel operator
 * H g = (I - P)(f̄ g) acts diagonally on the basis:
 *   ||H e_d||² = s_{d+m}/s_d                      for d < m,
 *   ||H e_d||² = s_{d+m}/s_d - s_d/s_{d-m}        for d >= m,
 * because P(z̄^m z^d) = (s_d/s_{d-m}) z^{d-m}.  This one derivation step is
 * validated against a dense 2D-quadrature Gram oracle before use.
 *
 * MO²(w) = sum_d lambda_d t_d(w) with the probability weights
 * t_d(w) = (x^d/(pi s_d))/k(x), x = |w|²; Carleson and Toeplitz numbers
 * reduce to measure moments m_d over the radial coordinate.
 */

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "focklab/geometry.hpp"
#include "focklab/moments.hpp"
#include "focklab/trend.hpp"

namespace focklab {

// ======================== normalized basis ===============================

class NormalizedBasis {
 public:
  explicit NormalizedBasis(MomentTable t);

  const MomentTable& table() const { return table_; }
  const Weight& weight() const { return table_.weight; }
  int d_max() const { return table_.d_max; }
  double log_norm2(int d) const;  // log ||z^d||² = log pi + log s_d

 private:
  MomentTable table_;
};

// ========================== Hankel spectra ===============================

struct SchattenVerdict {
  double p = 0;
  bool convergent = false;
  double term_slope = 0;
  double doubling_ratio = 0;
  double log_partial_sum = 0;
};

struct HankelSpectrum {
  int m = 0;
  std::vector<double> lambda;  // ||H e_d||², d = 0..d_max
  TailClass tail = TailClass::flat;
  double tail_slope = 0;
  bool bounded = false;  // tail not growing
  bool compact = false;  // tail decaying
  std::vector<SchattenVerdict> schatten;  // sums of lambda^{p/2}
};

HankelSpectrum hankel_spectrum(const NormalizedBasis& basis, int m, int d_max,
                               std::span<const double> schatten_ps = {});

/* Independent validation of the closed form: Gram matrix of
 * {(I-P)(z̄^m z^d)} by 2D product quadrature (trapezoid in the angle,
 * composite Gauss-Kronrod radially), fully numeric including the norms. */
struct DenseHankelOracle {
  int m = 0;
  std::vector<double> lambda_quad;  // normalized Gram diagonal
  double max_offdiag = 0;           // max normalized |G_de|, d != e
  double max_diag_mismatch = 0;     // vs the closed form, relative (1-guarded)
};

DenseHankelOracle dense_hankel_oracle(const NormalizedBasis& basis, int m,
                                      int d_max);

// ============================ MO / BMO ===================================

struct MOProfile {
  int m = 0;
  std::vector<double> w_abs;       // grid of |w|
  std::vector<double> mo_squared;  // MO²(w)
  double bmo_sup = 0;
  TailClass tail = TailClass::flat;
  bool bmo_finite = false;  // tail not growing
  bool vmo = false;         // tail decaying
};

MOProfile mo_profile(const NormalizedBasis& basis, int m,
                     std::span<const double> w_abs_grid);

// ============================== Bloch ====================================

struct BlochProfile {
  std::vector<double> z_abs;
  std::vector<double> values;  // |f'(s)|/beta(s,1) on the positive real axis
  double sup = 0;
  TailClass tail = TailClass::flat;
  bool finite = false;        // tail not growing
  bool little_bloch = false;  // tail decaying
};

// f given by real coefficients: f(z) = sum_j coeffs[j] z^j.
BlochProfile bloch_seminorm(const MomentTable& table,
                            std::span<const double> coeffs,
                            std::span<const double> z_abs_grid);

// ============================ measures ===================================

struct MeasureSpec {
  enum class Kind { lebesgue, radial_density, point_masses };
  Kind kind = Kind::lebesgue;
  std::string name = "lebesgue";
  // Radial density g(x) against Lebesgue dV, x = |z|²; support x <= x_cut.
  std::function<double(double)> density;
  double x_cut = std::numeric_limits<double>::infinity();
  // Point masses: nu = sum_k masses[k] * delta(points[k]).
  std::vector<C> points;
  std::vector<double> masses;

  static MeasureSpec lebesgue(
      double x_cut = std::numeric_limits<double>::infinity());
  static MeasureSpec radial(
      std::string name, std::function<double(double)> g,
      double x_cut = std::numeric_limits<double>::infinity());
  static MeasureSpec point_masses(std::string name, std::vector<C> pts,
                                  std::vector<double> masses);
};

// log of m_D(g) = integral_0^{x_cut} x^D e^{-Psi(x)} g(x) dx.
double log_measure_moment(const Weight& w, const MeasureSpec& spec, double D);

// =========================== Carleson ====================================

struct CarlesonReport {
  std::string measure;
  std::vector<double> z_abs;
  std::vector<double> condition_ii;  // ∫|K(w,z)|²/K(z,z) dnu_damped(w)
  double sup_ii = 0;
  TailClass trend = TailClass::flat;
  bool carleson = false;  // condition_ii trend not growing
  // Per lattice point: nu(B(a_k,r)) / (pi r² [Phi'(x_k)]^{-1}).
  std::vector<double> ball_ratios;
  double ratio_max = 0;
  double ratio_min = 0;
};

CarlesonReport carleson_test(const NormalizedBasis& basis,
                             const MeasureSpec& spec,
                             std::span<const double> z_abs_grid,
                             const PsiLattice* lattice = nullptr);

// ============================ Toeplitz ===================================

struct ToeplitzDiag {
  std::string measure;
  std::vector<double> entries;  // <T_nu e_d, e_d> = m_d(g)/s_d
  std::vector<SchattenVerdict> schatten;
};

ToeplitzDiag toeplitz_diag(const NormalizedBasis& basis,
                           const MeasureSpec& spec, int d_max,
                           std::span<const double> schatten_ps = {});

// ========================= trace identity ================================

struct TraceCheck {
  int rank = 0;
  double integral = 0;  // pi ∫ T̃(x) k(x) e^{-Psi(x)} dx, expected = rank
};

/* T = projection onto span{e_0..e_{rank-1}}; the Berezin transform T̃ and
 * the kernel are evaluated as separate series before the radial quadrature,
 * so the identity is exercised numerically rather than cancelled. */
TraceCheck trace_identity_check(const NormalizedBasis& basis, int rank);

// ============================= Besov =====================================

struct BesovReport {
  int m = 0;
  double p = 0;
  double tail_slope = 0;     // log-log slope of the asymptotic integrand
  bool tail_convergent = false;
  double integral = 0;       // pi ∫ (|f'|/beta)^p k e^{-Psi} dx over [0, X]
  double tail_estimate = 0;  // power-law extrapolation beyond X (if conv.)
  double integration_x_max = 0;
};

/* f = z^m.  The exact integrand uses the series beta and kernel; the
 * convergence verdict comes from the asymptotic form
 * (m r^{m-1})^p [Phi'(r²)]^{1-p/2} r sampled at large r, since the
 * asymptotic blows up spuriously at 0 when Phi'(0) = 0. */
BesovReport besov_diagnostic(const MomentTable& table, int m, double p,
                             double integration_x_max = 0);

}  // namespace focklab

#pragma once

/* Moment tables.
 *
 * s_d = integral_0^inf x^d e^{-Psi(x)} dx, stored as log s_d.  A table built
 * for dimension n stores the shifted sequence log s_{d+n-1} for d = 0..dMax,
 * which is exactly what the dimension-n kernel series consumes.
 *
 * Two routes compute log s_d:
 *   quadrature  adaptive Gauss-Kronrod around the saddle x* = PhiInverse(d)
 *   laplace     d log x* - Psi(x*) + log sqrt(2 pi x* / Phi'(x*))
 * The hybrid build uses quadrature up to a crossover index and the saddle
 * formula beyond it, cross-validating the two on a stride of indices.
 *
 * Tables persist to a versioned plain-text file; decimal round-trips are
 * bit-exact at 17 significant digits.
 */

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "focklab/weights.hpp"

namespace focklab {

enum class MomentMethod { quadrature, laplace, hybrid };

const char* to_string(MomentMethod m);
MomentMethod moment_method_from_string(const std::string& s);

struct MomentTable {
  Weight weight;
  int n = 1;
  int d_max = 0;
  MomentMethod method = MomentMethod::quadrature;
  std::vector<double> log_s;    // log s_{d+n-1}, d = 0..d_max
  std::vector<double> err_est;  // relative error estimate per entry

  // Bounds-checked access; the error message names the required dMax.
  double log_moment(int d) const;
};

// log s_{d+n-1} by adaptive quadrature; optional achieved-error output.
double log_moment_quadrature(const Weight& w, int n, int d,
                             double rel_tol = 1e-10,
                             double* err_out = nullptr);

// Saddle-point (Laplace) approximation of log s_d; d may be fractional.
// Requires d > Phi(0).
double laplace_log_moment(const Weight& w, double d);

/* Direct check of the Laplace factor: I(t) = integral e^{-h_t(x)} dx with
 * h_t(x) = -t log x + Psi(x) + t log x* - Psi(x*), x* = PhiInverse(t),
 * against the predicted sqrt(2 pi x* / Phi'(x*)).  ratio -> 1 as t grows. */
struct LaplaceDiagnostics {
  double t = 0;
  double x_star = 0;
  double i_value = 0;
  double i_asymptotic = 0;
  double ratio = 0;
};

LaplaceDiagnostics i_ratio(const Weight& w, double t);

struct MomentBuildOptions {
  int hybrid_crossover = 200;
  double route_disagreement_tol = 1e-3;  // relative, on log values
  std::size_t max_entries = std::size_t(1) << 23;
  double quad_rel_tol = 1e-10;
};

MomentTable build_moment_table(const Weight& w, int n, int d_max,
                               MomentMethod method,
                               const MomentBuildOptions& opt = {});

void save_moment_table(const MomentTable& table,
                       const std::filesystem::path& path);
MomentTable load_moment_table(const std::filesystem::path& path);

// Cache wrapper: loads a table matching (weight, n, dMax, method) from
// cache_dir when present, else builds and stores it.  Keys include the
// catalog hash, so catalog changes invalidate old entries.
MomentTable cached_moment_table(const Weight& w, int n, int d_max,
                                MomentMethod method,
                                const std::filesystem::path& cache_dir,
                                const MomentBuildOptions& opt = {});

}  // namespace focklab

#pragma once

/* Small numeric helpers shared across the library: stable sums of terms kept
 * in log space, least-squares slope fits, and grid builders.  Everything here
 * is deterministic and allocation-light; heavier machinery (adaptive
 * quadrature, series windows) lives with its module. */

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace focklab {

inline constexpr double kLogPi = 1.1447298858494001741;  // log(pi)
inline constexpr double kPi = std::numbers::pi;

// Streaming log-sum-exp: add terms by their logarithm, read back
// log(sum exp(t_i)) without overflow.  Empty accumulator reads -inf.
class LogSumAccumulator {
 public:
  void add_log(double log_term) {
    if (std::isinf(log_term) && log_term < 0) return;
    if (log_term > max_) {
      if (max_ > -std::numeric_limits<double>::infinity())
        sum_ *= std::exp(max_ - log_term);
      max_ = log_term;
    }
    sum_ += std::exp(log_term - max_);
  }
  double log_sum() const {
    if (sum_ <= 0.0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

// log(exp(a) - exp(b)) for a > b; -inf when the difference underflows.
inline double log_diff_exp(double a, double b) {
  if (b >= a) return -std::numeric_limits<double>::infinity();
  return a + std::log1p(-std::exp(b - a));
}

struct LineFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  std::size_t points = 0;
};

// Ordinary least squares y = a + b x.  Requires at least two distinct x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("fit_line: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    ++n;
  }
  LineFit fit;
  if (n < 2) return fit;
  const double det = n * sxx - sx * sx;
  if (det <= 0 || det < 1e-12 * n * sxx) return fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points = n;
  return fit;
}

// Slope of log(y) against log(x), skipping non-positive entries.
inline double fit_loglog_slope(std::span<const double> x,
                               std::span<const double> y) {
  std::vector<double> lx, ly;
  lx.reserve(x.size());
  ly.reserve(y.size());
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly).slope;
}

inline std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) return {lo};
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return g;
}

inline std::vector<double> logspace(double lo, double hi, int points) {
  if (lo <= 0 || hi <= lo)
    throw std::invalid_argument("logspace: need 0 < lo < hi");
  if (points < 2) return {lo};
  const double llo = std::log(lo), lhi = std::log(hi);
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * i / (points - 1));
  return g;
}

// FNV-1a, used for cache keys and the catalog hash.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace focklab

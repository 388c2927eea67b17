#pragma once

/* Trend classifiers shared by the spectral diagnostics.  All asymptotic
 * verdicts in this library reduce to log-log slope fits over the top decade
 * of a grid, with fixed thresholds:
 *
 *   slope < -0.05           decaying
 *   |slope| <= 0.05         flat
 *   slope > +0.05           growing
 *
 * A positive-term sum is classified convergent when the fitted slope of its
 * terms against the index is below -1.05 (safely under the -1 boundary, which
 * itself diverges).  The partial-sum doubling ratio is reported alongside as
 * a secondary indicator. */

#include <span>
#include <string>

namespace focklab {

enum class TailClass { decaying, flat, growing };

inline const char* to_string(TailClass t) {
  switch (t) {
    case TailClass::decaying: return "decaying";
    case TailClass::flat: return "flat";
    case TailClass::growing: return "growing";
  }
  return "?";
}

inline constexpr double kFlatBand = 0.05;        // |slope| band for "flat"
inline constexpr double kSumSlopeMargin = 0.05;  // convergent iff slope < -1 - margin
inline constexpr double kDoublingBand = 1.02;    // reported-only indicator

struct TrendReport {
  TailClass tail = TailClass::flat;
  double slope = 0.0;        // fitted over the top decade of the grid
  std::size_t points = 0;
};

// Fit over {(x_i, y_i): x_i >= max(x)/10}, both positive.
TrendReport classify_tail(std::span<const double> x, std::span<const double> y);

struct SumReport {
  bool convergent = false;
  double term_slope = 0.0;      // slope of log(term) vs log(index)
  double doubling_ratio = 0.0;  // S(full) / S(half), linear scale
  double log_partial_sum = 0.0;
};

// Convergence verdict for sum of positive terms[i] at indices d[i].
SumReport classify_sum(std::span<const double> d, std::span<const double> terms);

}  // namespace focklab

#include "focklab/trend.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "focklab/numerics.hpp"

namespace focklab {

TrendReport classify_tail(std::span<const double> x, std::span<const double> y) {
  TrendReport rep;
  double xmax = 0;
  for (double v : x) xmax = std::max(xmax, v);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] >= xmax / 10.0 && x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const LineFit fit = fit_line(lx, ly);
  rep.points = fit.points;
  rep.slope = fit.slope;
  if (!std::isfinite(fit.slope)) {
    // Degenerate grid or vanishing data: treat exact zeros as decaying.
    bool all_zero = true;
    for (double v : y)
      if (v != 0.0) all_zero = false;
    rep.tail = all_zero ? TailClass::decaying : TailClass::flat;
    rep.slope = 0.0;
    return rep;
  }
  if (fit.slope < -kFlatBand)
    rep.tail = TailClass::decaying;
  else if (fit.slope > kFlatBand)
    rep.tail = TailClass::growing;
  else
    rep.tail = TailClass::flat;
  return rep;
}

SumReport classify_sum(std::span<const double> d, std::span<const double> terms) {
  SumReport rep;
  // Term-decay slope over the top decade decides convergence; the partial-sum
  // doubling ratio is reported but does not gate (it is too blunt near the
  // boundary exponent -1 at desk-scale cutoffs).
  const TrendReport tail = classify_tail(d, terms);
  rep.term_slope = tail.slope;
  rep.convergent = std::isfinite(tail.slope) && tail.slope < -1.0 - kSumSlopeMargin;

  LogSumAccumulator full, half;
  double dmax = 0;
  for (double v : d) dmax = std::max(dmax, v);
  for (std::size_t i = 0; i < d.size() && i < terms.size(); ++i) {
    if (terms[i] <= 0) continue;
    const double lt = std::log(terms[i]);
    full.add_log(lt);
    if (d[i] <= dmax / 2.0) half.add_log(lt);
  }
  rep.log_partial_sum = full.log_sum();
  rep.doubling_ratio = std::exp(full.log_sum() - half.log_sum());
  return rep;
}

}  // namespace focklab

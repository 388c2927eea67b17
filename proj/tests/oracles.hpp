#pragma once

/* Closed-form oracles used by the tests.  Every formula here is derived
 * independently of the library code path it checks (classical special
 * function identities), so agreement is evidence rather than tautology. */

#include <cmath>
#include <cstdlib>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace oracles {

// integral_0^inf x^d e^{-a x} dx = Gamma(d+1) / a^{d+1}
inline double log_moment_linear(double a, int d) {
  return std::lgamma(double(d) + 1.0) - (double(d) + 1.0) * std::log(a);
}

// integral_0^inf x^d e^{-x^p} dx = Gamma((d+1)/p) / p
inline double log_moment_monomial(double p, int d) {
  return std::lgamma((double(d) + 1.0) / p) - std::log(p);
}

// integral_0^cut x^d e^{-x} dx = Gamma(d+1) P(d+1, cut)
inline double log_restricted_moment_linear(double cut, int d) {
  return std::lgamma(double(d) + 1.0) +
         std::log(boost::math::gamma_p(double(d) + 1.0, cut));
}

// Gamma(t+1) e^t / (t^t sqrt(2 pi t)) = 1 + 1/12t + 1/288t^2 - 139/51840t^3
inline double stirling_ratio(double t) {
  return 1.0 + 1.0 / (12.0 * t) + 1.0 / (288.0 * t * t) -
         139.0 / (51840.0 * t * t * t);
}

// ||H_{conj(z)^m} e_d||^2 for Psi = a x: moments are Gamma(d+1)/a^{d+1}, so
// s_{d+m}/s_d - s_d/s_{d-m} = [(d+m)!/d! - d!/(d-m)!] / a^m.
inline double hankel_lambda_linear(double a, int m, int d) {
  const double up =
      std::exp(std::lgamma(double(d + m) + 1.0) - std::lgamma(double(d) + 1.0));
  const double down =
      d < m ? 0.0
            : std::exp(std::lgamma(double(d) + 1.0) -
                       std::lgamma(double(d - m) + 1.0));
  return (up - down) / std::pow(a, double(m));
}

// Same for Psi = x^2: s_d = Gamma((d+1)/2)/2.
inline double hankel_lambda_gaussian(int m, int d) {
  const auto ls = [](int i) { return std::lgamma((double(i) + 1.0) / 2.0); };
  const double up = std::exp(ls(d + m) - ls(d));
  const double down = d < m ? 0.0 : std::exp(ls(d) - ls(d - m));
  return up - down;
}

// Cache directory shared across the test binaries (set by ctest).
inline std::string cache_dir() {
  if (const char* env = std::getenv("FOCKLAB_CACHE_DIR")) return env;
  return ".focklab-cache";
}

}  // namespace oracles

#ifndef BLOCKREG_MATH_HPP
#define BLOCKREG_MATH_HPP

#include <cmath>
#include <limits>

namespace blockreg {

inline double log_sum_exp(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double m = (a > b) ? a : b;
  return m + std::log1p(std::exp(((a > b) ? b : a) - m));
}

inline double norm_cdf(double x) {
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

// log Phi(x), usable deep into the lower tail. erfc in long double holds
// until its argument underflows (x ~ -150); below that switch to the
// standard asymptotic expansion of the Mills ratio.
inline double log_norm_cdf(double x) {
  if (x > -20.0) {
    long double v = 0.5L * erfcl(-(long double)x * 0.70710678118654752440L);
    return (double)logl(v);
  }
  // Phi(x) ~ phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8)
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2)
      + 105.0 / (x2 * x2 * x2 * x2);
  return -0.5 * x2 - 0.5 * std::log(2.0 * M_PI) - std::log(-x) + std::log(series);
}

// t^2/2 + log Phi(t). The two terms cancel catastrophically for t << 0 if
// computed separately; here the quadratic drops out of the expansion.
inline double log_norm_cdf_plus_half_sq(double t) {
  if (t > -20.0) return 0.5 * t * t + log_norm_cdf(t);
  const double t2 = t * t;
  const double series = 1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2)
      + 105.0 / (t2 * t2 * t2 * t2);
  return -0.5 * std::log(2.0 * M_PI) - std::log(-t) + std::log(series);
}

// log(1 - Phi(t)) = log Phi(-t)
inline double log_norm_sf(double t) { return log_norm_cdf(-t); }

}  // namespace blockreg

#endif

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "msburden/errors.hpp"

// Small normal-theory helpers shared by the estimators.

namespace msburden {

inline double norm_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

inline double norm_quantile(double p) {
  boost::math::normal_distribution<double> d;
  return boost::math::quantile(d, p);
}

// 2 * (1 - Phi(|z|)), computed through erfc to keep precision in the tail.
inline double two_sided_p(double z) {
  if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s / v.size());
}

inline double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  long double s = 0.0L;
  for (double x : v) {
    long double d = static_cast<long double>(x) - m;
    s += d * d;
  }
  return std::sqrt(static_cast<double>(s / (v.size() - 1)));
}

// Point estimate with Wald-style inference attached.
struct QuantityInference {
  double estimate = 0.0;
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double p = 1.0;
};

inline double wald_z(double estimate, double se) {
  if (se > 0.0) return estimate / se;
  if (estimate == 0.0) return 0.0;
  return estimate > 0.0 ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
}

inline QuantityInference wald_inference(double estimate, double se, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(errc::invalid_config, "alpha must lie in (0, 1)");
  double z = norm_quantile(1.0 - alpha / 2.0);
  QuantityInference q;
  q.estimate = estimate;
  q.se = se;
  q.lower = estimate - z * se;
  q.upper = estimate + z * se;
  q.p = two_sided_p(wald_z(estimate, se));
  return q;
}

// Linear-interpolation empirical quantile on a copy of the data.
inline double empirical_quantile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  if (p <= 0.0) return v.front();
  if (p >= 1.0) return v.back();
  double h = p * (v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(h);
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  double w = h - lo;
  return v[lo] * (1.0 - w) + v[hi] * w;
}

}  // namespace msburden

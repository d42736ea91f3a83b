#pragma once

#include <cmath>

namespace menuabc {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

inline double normal_log_pdf(double x, double mean, double std) {
  const double z = (x - mean) / std;
  return -0.5 * z * z - std::log(std) - 0.5 * std::log(2.0 * M_PI);
}

// log Phi(z), stable in the deep lower tail where erfc underflows.
inline double log_normal_cdf(double z) {
  if (z > -10.0) {
    return std::log(normal_cdf(z));
  }
  // Asymptotic expansion of Mills' ratio for z << 0.
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return -0.5 * z2 - std::log(-z) - 0.5 * std::log(2.0 * M_PI) + std::log(series);
}

}  // namespace menuabc

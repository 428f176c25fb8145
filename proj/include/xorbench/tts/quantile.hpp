#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace xorbench {

/// Linear interpolation between order statistics (Hyndman-Fan type 7) on
/// the extended reals: any bracket touching +inf yields +inf.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(q >= 0 && q <= 1)) throw std::invalid_argument("quantile level outside [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (frac == 0 || lo + 1 >= sorted.size()) return sorted[lo];
  const double a = sorted[lo], b = sorted[lo + 1];
  if (std::isinf(b)) return std::numeric_limits<double>::infinity();
  return a + frac * (b - a);
}

inline double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, q);
}

struct MeanSd {
  double mean = 0;
  double sd = 0;
};

/// Sample mean and (n-1) standard deviation.
inline MeanSd mean_sd(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean_sd of empty sample");
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return {mean, sd};
}

}  // namespace xorbench

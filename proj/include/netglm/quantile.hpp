#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace netglm {

// Linear interpolation between order statistics (the common "type 7" rule).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::nan("");
  double h = (sorted.size() - 1) * p;
  auto lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

// min, first quartile, median, third quartile, max.
inline std::array<double, 5> five_numbers(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return {quantile_sorted(v, 0.0), quantile_sorted(v, 0.25), quantile_sorted(v, 0.5), quantile_sorted(v, 0.75),
          quantile_sorted(v, 1.0)};
}

}  // namespace netglm

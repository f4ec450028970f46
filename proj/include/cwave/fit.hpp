#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace cwave {

/// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Exponent p of values ~ C (1+t)^{-p}.
inline double power_decay_exponent(const std::vector<double>& t, const std::vector<double>& values) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(values[i] > 0.0)) continue;
    lx.push_back(std::log1p(t[i]));
    ly.push_back(std::log(values[i]));
  }
  return -ls_slope(lx, ly);
}

/// Rate c of values ~ C e^{-c t}.
inline double exponential_decay_rate(const std::vector<double>& t,
                                     const std::vector<double>& values) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(values[i] > 0.0)) continue;
    lx.push_back(t[i]);
    ly.push_back(std::log(values[i]));
  }
  return -ls_slope(lx, ly);
}

}  // namespace cwave

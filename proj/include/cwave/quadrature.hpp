#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace cwave {

/// Gauss-Hermite rule for the weight e^{-y^2}: nodes and weights.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled_weights;  ///< weights[i] * exp(nodes[i]^2)
};

/// Golub-Welsch construction; cached per n.
const GaussHermiteRule& gauss_hermite(int n);

/// Integral over the real line of f, after the substitution x = center + width * y.
/// Exact for polynomial times exp(-((x-center)/width)^2) integrands up to the rule's degree.
double integrate_gaussian_scaled(const std::function<double(double)>& f, double center,
                                 double width, int n = 64);

/// Adaptive Gauss-Kronrod integral of f over [a, b].
double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-13, double* error_estimate = nullptr);

/// Adaptive integral over [a, b] split at the given interior breakpoints.
double integrate_piecewise(const std::function<double(double)>& f, std::vector<double> breaks,
                           double rel_tol = 1e-13);

}  // namespace cwave

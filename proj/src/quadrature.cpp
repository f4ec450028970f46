#include "cwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cwave {

const GaussHermiteRule& gauss_hermite(int n) {
  static std::map<int, GaussHermiteRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.scaled_weights.resize(n);
  // Orthonormal Hermite recursion; the eigenvector route loses the relative
  // accuracy of the outermost weights.
  auto orthonormal = [n](double y, double* sum_sq, double* pn, double* dpn) {
    double p_prev = 0.0, p = std::pow(M_PI, -0.25), acc = p * p;
    for (int k = 0; k < n; ++k) {
      const double next = std::sqrt(2.0 / (k + 1)) * y * p - std::sqrt(double(k) / (k + 1)) * p_prev;
      p_prev = p;
      p = next;
      if (k + 1 < n) acc += p * p;
    }
    *sum_sq = acc;
    *pn = p;
    *dpn = std::sqrt(2.0 * n) * p_prev;
  };
  for (int i = 0; i < n; ++i) {
    double y = es.eigenvalues()(i), sum_sq, pn, dpn;
    for (int it = 0; it < 2; ++it) {
      orthonormal(y, &sum_sq, &pn, &dpn);
      y -= pn / dpn;
    }
    orthonormal(y, &sum_sq, &pn, &dpn);
    rule.nodes[i] = y;
    rule.weights[i] = 1.0 / sum_sq;
    rule.scaled_weights[i] = std::exp(y * y) / sum_sq;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double integrate_gaussian_scaled(const std::function<double(double)>& f, double center,
                                 double width, int n) {
  const GaussHermiteRule& rule = gauss_hermite(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i];
    acc += rule.scaled_weights[i] * f(center + width * y);
  }
  return acc * width;
}

double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double* error_estimate) {
  double err = 0.0;
  const double r =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, rel_tol, &err);
  if (error_estimate) *error_estimate = err;
  return r;
}

double integrate_piecewise(const std::function<double(double)>& f, std::vector<double> breaks,
                           double rel_tol) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    acc += integrate_interval(f, breaks[i], breaks[i + 1], rel_tol);
  }
  return acc;
}

}  // namespace cwave

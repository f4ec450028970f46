#pragma once

#include <array>
#include <cstddef>

namespace cwave {

/// Truncated Taylor series in one variable, stored as normalized coefficients
/// c[k] = f^(k)(x0) / k!. Arithmetic propagates derivatives exactly up to order N.
template <int N>
class Jet {
 public:
  static_assert(N >= 0);
  static constexpr int order = N;

  constexpr Jet() : c_{} {}
  constexpr Jet(double value) : c_{} { c_[0] = value; }  // NOLINT(implicit)

  static constexpr Jet variable(double x0) {
    Jet j(x0);
    if constexpr (N >= 1) j.c_[1] = 1.0;
    return j;
  }

  /// Builds a jet from plain derivatives d[k] = f^(k)(x0).
  template <std::size_t M>
  static Jet from_derivatives(const std::array<double, M>& d) {
    static_assert(M >= N + 1);
    Jet j;
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
      if (k > 0) fact *= k;
      j.c_[k] = d[k] / fact;
    }
    return j;
  }

  double value() const { return c_[0]; }
  double coeff(int k) const { return c_[k]; }
  double& coeff(int k) { return c_[k]; }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c_[k] * fact;
  }

  /// Jet of f' (one order lower).
  Jet<(N > 0 ? N - 1 : 0)> dx() const {
    Jet<(N > 0 ? N - 1 : 0)> r;
    for (int k = 0; k < N; ++k) r.coeff(k) = (k + 1) * c_[k + 1];
    return r;
  }

  template <int M>
  Jet<M> truncate() const {
    static_assert(M <= N);
    Jet<M> r;
    for (int k = 0; k <= M; ++k) r.coeff(k) = c_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator+(Jet a, double s) { a.c_[0] += s; return a; }
  friend Jet operator+(double s, Jet a) { a.c_[0] += s; return a; }
  friend Jet operator-(Jet a, double s) { a.c_[0] -= s; return a; }
  friend Jet operator-(double s, Jet a) { a *= -1.0; a.c_[0] += s; return a; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= N; ++k) {
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
      r.c_[k] = acc;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet q;
    for (int k = 0; k <= N; ++k) {
      double acc = a.c_[k];
      for (int j = 1; j <= k; ++j) acc -= b.c_[j] * q.c_[k - j];
      q.c_[k] = acc / b.c_[0];
    }
    return q;
  }

  friend Jet operator/(double s, const Jet& b) { return Jet(s) / b; }

 private:
  std::array<double, N + 1> c_;
};

template <int N>
Jet<N> square(const Jet<N>& a) {
  return a * a;
}

}  // namespace cwave

#pragma once

#include <array>

namespace cwave {

using Vec3 = std::array<double, 3>;

/// Strict positivity floor applied to volumes and temperatures.
inline constexpr double kPositivityFloor = 1e-12;

/// Ideal polytropic gas constants.
///
/// gamma == 1 is accepted (the isothermal end of the admissible range) so that
/// degenerate diffusion-wave configurations can be expressed; constructions
/// that divide by gamma - 1 reject it themselves.
class GasParams {
 public:
  GasParams(double R, double gamma, double kappa, bool theorem_regime = false);

  double R() const { return R_; }
  double gamma() const { return gamma_; }
  double kappa() const { return kappa_; }
  bool theorem_regime() const { return theorem_regime_; }

  /// (gamma - 1) / (2R), the kinetic weight in E = theta + (gamma-1)/(2R) u^2.
  double kinetic_factor() const { return (gamma_ - 1.0) / (2.0 * R_); }

  static GasParams reference() { return GasParams(1.0, 1.4, 1.0, true); }

 private:
  double R_;
  double gamma_;
  double kappa_;
  bool theorem_regime_;
};

/// Pointwise primitive state (v, u, theta).
class PrimState {
 public:
  PrimState(double v, double u, double theta);

  double v() const { return v_; }
  double u() const { return u_; }
  double theta() const { return theta_; }

  /// Internal energy e = R theta / (gamma - 1).
  double internal_energy(const GasParams& g) const;

  /// The same state seen under x -> -x, u -> -u.
  PrimState reflected() const { return PrimState(v_, -u_, theta_); }

  Vec3 as_array() const { return {v_, u_, theta_}; }

  friend bool operator==(const PrimState&, const PrimState&) = default;

 private:
  double v_;
  double u_;
  double theta_;
};

/// Conserved-coordinate state (v, u, E) with E = theta + (gamma-1)/(2R) u^2.
class ConservedState {
 public:
  ConservedState(double v, double u, double E, const GasParams& g);

  double v() const { return v_; }
  double u() const { return u_; }
  double E() const { return E_; }

  Vec3 as_array() const { return {v_, u_, E_}; }

 private:
  double v_;
  double u_;
  double E_;
};

double pressure(const PrimState& z, const GasParams& g);

/// Characteristic speeds (lambda1, lambda2, lambda3) of the inviscid part.
Vec3 eigenvalues(const PrimState& z, const GasParams& g);

/// Largest characteristic speed sqrt(gamma p / v).
double sound_speed(const PrimState& z, const GasParams& g);

ConservedState to_conserved(const PrimState& z, const GasParams& g);
PrimState from_conserved(const ConservedState& m, const GasParams& g);

/// Temperature recovered from raw conserved components, without validation.
inline double temperature_from(double u, double E, const GasParams& g) {
  return E - g.kinetic_factor() * u * u;
}

}  // namespace cwave

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cwave/csv.hpp"
#include "cwave/jet.hpp"
#include "cwave/riemann.hpp"
#include "cwave/thermo.hpp"

namespace cwave {

struct ProfileOptions {
  double rtol = 1e-10;
  double h_max = 0.025;
  double tail_tol = 1e-9;  ///< integration stops once |V - end| < tail_tol * delta
  double xi_max = 1e5;     ///< hard cap on |xi| before the tail is declared truncated
  long max_steps = 2000000;
};

/// Fitted constants of the exponential envelopes
/// |V - end| <= C_value delta e^{-c delta |xi|}, |V_xi| <= C_deriv delta^2 e^{-c delta |xi|},
/// |Theta_xi| <= C_theta |V_xi|.
struct DecayFit {
  double c = 0.0;
  double C_value = 0.0;
  double C_deriv = 0.0;
  double C_theta = 0.0;
  double rate_left = 0.0;          ///< H'(v_left)/kappa
  double rate_right = 0.0;         ///< H'(v_right)/kappa
  double fitted_rate_left = 0.0;   ///< log-slope of |V - v_left| on the left tail
  double fitted_rate_right = 0.0;  ///< log-slope of |V - v_right| on the right tail
};

/// Sampled viscous shock profile (V, U, Theta)(xi), xi = x - s t.
///
/// The reference state is the intermediate state z_m (right end of a 1-shock,
/// left end of a 3-shock); U and Theta are algebraic functions of V.
struct ShockProfile {
  int family = 1;
  double s = 0.0;
  std::vector<double> xi;
  std::vector<double> V;
  std::vector<double> U;
  std::vector<double> Theta;
  std::vector<double> V_xi;  ///< exact slopes H(V)/kappa
  PrimState left_state{1.0, 0.0, 1.0};
  PrimState right_state{1.0, 0.0, 1.0};
  double delta = 0.0;
  std::string normalization = "midpoint";
  DecayFit decay_fit;
  double lambda_left = 0.0;   ///< exponential tail rate used left of the samples
  double lambda_right = 0.0;  ///< exponential tail rate used right of the samples
  GasParams gas = GasParams::reference();
  std::vector<std::string> warnings;

  bool constant() const { return delta == 0.0; }
  const PrimState& intermediate() const { return family == 1 ? right_state : left_state; }
  const PrimState& outer() const { return family == 1 ? left_state : right_state; }
};

struct ProfileSample {
  double V;
  double U;
  double Theta;
};

struct ProfileReport {
  bool chain_a = false;        ///< p_m < s^2 v_m < gamma p_m
  bool chain_b = false;        ///< p_o < gamma p_o < s^2 v_o at the outer state
  bool monotone = false;
  bool envelopes = false;      ///< fitted value/derivative envelopes with c > 0 and finite C
  bool compressive = false;    ///< s (V_right - V_left) > 0
  double u_relation_defect = 0.0;  ///< max |dU + s dV| between samples, relative to delta
  double end_state_error = 0.0;  ///< recovered (U, Theta) at v_outer vs the outer state
  double tail_distance = 0.0;    ///< max |V - end| at the two extreme samples, relative to delta
  DecayFit fit;
  bool ok() const { return chain_a && chain_b && monotone && envelopes && compressive; }
};

/// Flux H(V) of the profile equation kappa V' = H(V), written in w = V - v_m.
/// `w_outer` is v_outer - v_m, the second root of the numerator.
template <class T>
T h_of_w(const T& w, double s, double v_ref, double p_ref, double w_outer, const GasParams& g) {
  const double s2 = s * s;
  const T V = w + v_ref;
  const T num = s * g.R() * V * (0.5 * (g.gamma() + 1.0) * s2) * w * (w - w_outer);
  const T den = (g.gamma() - 1.0) * (p_ref - s2 * v_ref - 2.0 * s2 * w);
  return num / den;
}

/// H(V) for the shock sd (family 1 or 3); throws singular_flux near a zero denominator.
double h_flux(double V, const ShockData& sd, const GasParams& g);
/// dH/dV at V.
double h_flux_derivative(double V, const ShockData& sd, const GasParams& g);

ShockProfile integrate_profile(const ShockData& sd, const GasParams& g,
                               const ProfileOptions& opts = {});

/// Fills U and Theta of a profile from its V samples.
void recover_velocity_temperature(ShockProfile& profile);

ProfileReport validate_profile(const ShockProfile& profile);

/// V at xi: cubic Hermite inside the samples, exponential tails outside.
double evaluate_V(const ShockProfile& profile, double xi);
ProfileSample evaluate(const ShockProfile& profile, double xi);
ProfileSample recover_from_V(const ShockProfile& profile, double V);

/// Mirror of a profile under x -> -x, u -> -u (family 1 <-> 3).
ShockProfile reflect(const ShockProfile& profile);

void write_profile_csv(const ShockProfile& profile, std::ostream& os, const Metadata& extra = {});

template <int N>
struct ProfileJet {
  Jet<N> V;
  Jet<N> U;
  Jet<N> Theta;
};

/// Taylor jets in xi of (V, U, Theta). Derivatives come from the profile
/// equation itself (Picard recursion on the Taylor coefficients).
template <int N>
ProfileJet<N> profile_jet(const ShockProfile& p, double xi) {
  const PrimState& zr = p.intermediate();
  const double v_ref = zr.v();
  const double p_ref = pressure(zr, p.gas);
  const double w_outer = p.outer().v() - v_ref;
  Jet<N> w(evaluate_V(p, xi) - v_ref);
  if (!p.constant()) {
    for (int k = 0; k < N; ++k) {
      const Jet<N> h = h_of_w(w, p.s, v_ref, p_ref, w_outer, p.gas);
      w.coeff(k + 1) = h.coeff(k) / (p.gas.kappa() * (k + 1));
    }
  }
  const double s2 = p.s * p.s;
  ProfileJet<N> r;
  r.V = w + v_ref;
  r.U = zr.u() - p.s * w;
  r.Theta = zr.theta() + (-s2 * (w * w) + (p_ref - s2 * v_ref) * w) / p.gas.R();
  return r;
}

}  // namespace cwave

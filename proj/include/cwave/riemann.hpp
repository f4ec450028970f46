#pragma once

#include <optional>
#include <string>

#include "cwave/thermo.hpp"

namespace cwave {

/// One admissible (or zero-strength) shock of the 1- or 3-family.
struct ShockData {
  int family = 1;
  double s = 0.0;
  PrimState left;
  PrimState right;
  double delta = 0.0;  ///< |dv| + |du| + |dtheta|

  /// The intermediate state z_m of the two-shock pattern (right end for
  /// family 1, left end for family 3).
  const PrimState& intermediate() const { return family == 1 ? right : left; }
  /// The far-field end (z_- for family 1, z_+ for family 3).
  const PrimState& outer() const { return family == 1 ? left : right; }

  bool zero_strength() const { return delta == 0.0; }

  /// Mirror image under x -> -x, u -> -u: a family-3 shock becomes family 1
  /// and vice versa, with left and right exchanged and the speed negated.
  ShockData reflected() const;

  /// Degenerate shock sitting at state z, moving with the characteristic speed.
  static ShockData trivial(int family, const PrimState& z, const GasParams& g);
};

struct Strengths {
  double delta1 = 0.0;
  double delta3 = 0.0;
  double delta = 0.0;  ///< min(delta1, delta3)
};

struct RiemannOptions {
  double rh_tol = 1e-10;
  double ratio_bound = 10.0;   ///< C in delta1 + delta3 <= C delta
  double omega_radius = 0.3;   ///< size of the neighbourhood of z_-, warning only
};

struct TwoShockSolution {
  PrimState z_minus;
  PrimState z_m;
  PrimState z_plus;
  ShockData shock1;
  ShockData shock3;
  double s1 = 0.0;
  double s3 = 0.0;
  double delta1 = 0.0;
  double delta3 = 0.0;
  double delta = 0.0;
  double d_minus = 0.0;      ///< ((gamma-1)/2)(v_m - v_-)/v_m
  double locus_constant = 0.0;  ///< (delta1 + delta3) / |z_+ - z_-|
  bool same_order = false;   ///< delta1 + delta3 <= ratio_bound * delta
  bool within_omega = true;  ///< |z_+ - z_-| <= omega_radius
  std::string warning;
};

/// Entropy and sign-condition checks of an accepted solution.
struct EntropyReport {
  bool lax_1 = false;          ///< lambda1(z_-) > s1 > lambda1(z_m)
  bool lax_3 = false;          ///< lambda3(z_m) > s3 > lambda3(z_+)
  bool velocity_order = false; ///< u_- > u_m > u_+
  bool sign_chain_1a = false;  ///< p_m < s1^2 v_m < gamma p_m
  bool sign_chain_1b = false;  ///< p_- < gamma p_- < s1^2 v_-
  bool sign_chain_3a = false;  ///< p_m < s3^2 v_m < gamma p_m
  bool sign_chain_3b = false;  ///< p_+ < gamma p_+ < s3^2 v_+
  bool all() const {
    return lax_1 && lax_3 && velocity_order && sign_chain_1a && sign_chain_1b && sign_chain_3a &&
           sign_chain_3b;
  }
};

ShockData shock_locus_1(const PrimState& z_minus, double v_m, const GasParams& g);
ShockData shock_locus_3(const PrimState& z_m, double v_plus, const GasParams& g);

/// Builds the pattern from generators (z_-, v_m, v_+). Equal volumes give a
/// zero-strength shock in that family.
TwoShockSolution build_two_shock(const PrimState& z_minus, double v_m, double v_plus,
                                 const GasParams& g, const RiemannOptions& opts = {});

/// Finds the intermediate state connecting z_- to z_+ by a 1-shock and a 3-shock.
TwoShockSolution solve_two_shock(const PrimState& z_minus, const PrimState& z_plus,
                                 const GasParams& g, const RiemannOptions& opts = {});

/// Rankine-Hugoniot defects (mass, momentum, energy) of a shock.
Vec3 rh_residual(const ShockData& sd, const GasParams& g);

Strengths strengths(const TwoShockSolution& sol);

EntropyReport check_entropy(const TwoShockSolution& sol, const GasParams& g);

double jump_strength(const PrimState& a, const PrimState& b);

}  // namespace cwave

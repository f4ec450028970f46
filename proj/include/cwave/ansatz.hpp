#pragma once

#include <ostream>
#include <vector>

#include "cwave/csv.hpp"
#include "cwave/diffusion_wave.hpp"
#include "cwave/jet.hpp"
#include "cwave/riemann.hpp"
#include "cwave/shock_profile.hpp"
#include "cwave/thermo.hpp"

namespace cwave {

struct Shifts {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
};

/// Pointwise state carried in both primitive and conserved form.
struct Fields {
  double v;
  double u;
  double theta;
  double E;
};

/// Compactly supported polynomial bump of order 4 added to (v, u, E):
/// amplitude * (1 - y^2)^4 (even) or amplitude * y (1 - y^2)^4 (odd, zero mass),
/// y = (x - center) / half_width, |y| < 1.
struct Bump {
  double center = 0.0;
  double half_width = 1.0;
  Vec3 amplitude{0.0, 0.0, 0.0};
  bool odd = false;

  /// Even bump carrying the prescribed mass in each component.
  static Bump with_mass(double center, double half_width, const Vec3& mass);

  Vec3 value(double x) const;
  Vec3 mass() const;
  double lo() const { return center - half_width; }
  double hi() const { return center + half_width; }
};

/// Composite wave plus diffusion wave: shock profiles of both families, the
/// heat-kernel wave, the shifts, and the wave basis r1, r2, r3 in (v, u, E).
class CompositeAnsatz {
 public:
  CompositeAnsatz(const TwoShockSolution& sol, const GasParams& g, const ProfileOptions& opts = {});
  CompositeAnsatz(const TwoShockSolution& sol, ShockProfile p1, ShockProfile p3, const GasParams& g);

  const TwoShockSolution& solution() const { return sol_; }
  const GasParams& gas() const { return g_; }
  const ShockProfile& profile1() const { return p1_; }
  const ShockProfile& profile3() const { return p3_; }
  const DiffusionWave& dw() const { return dw_; }
  const Shifts& shifts() const { return shifts_; }
  const PrimState& z_m() const { return sol_.z_m; }

  /// Copy of this ansatz carrying other shifts (the profiles are shared data).
  CompositeAnsatz with_shifts(const Shifts& s) const;

  const Vec3& r1() const { return r1_; }
  const Vec3& r2() const { return r2_; }
  const Vec3& r3() const { return r3_; }
  /// 2-norm condition number of the basis matrix restricted to active families.
  double basis_condition() const;

 private:
  TwoShockSolution sol_;
  GasParams g_;
  ShockProfile p1_;
  ShockProfile p3_;
  DiffusionWave dw_;
  Shifts shifts_;
  Vec3 r1_{}, r2_{}, r3_{};
};

/// Shifted composite m-bar_{beta1,beta3}(x, t); with `use_shifts` false the shifts are zero.
Fields composite_bar_m(double x, double t, const CompositeAnsatz& a, bool use_shifts = true);

/// theta-bar - (Theta1 + Theta3 - theta_m); equals -((gamma-1)/R)(U1 - u_m)(U3 - u_m).
double composite_cross_term(double x, double t, const CompositeAnsatz& a);

/// Asymptotic state (V, U, Theta) with the E-level temperature. Throws regime if Theta <= 0.
Fields evaluate_M(double x, double t, const CompositeAnsatz& a);

/// Initial data: composite with planted shifts (beta2 plants a diffusion wave) plus bumps.
struct InitialData {
  CompositeAnsatz base;
  std::vector<Bump> bumps;

  Fields at(double x) const;
  /// Throws bad_perturbation if v or theta fails to stay positive on the bump supports.
  void check_positivity() const;
};

InitialData make_initial_data(const CompositeAnsatz& a, const Shifts& planted,
                              std::vector<Bump> bumps);

/// Integral of m(., 0) - m-bar(., 0) in (v, u, E) against the unshifted composite.
Vec3 initial_mass_vector(const InitialData& data, const CompositeAnsatz& a);

/// Integral of m0 - M(., 0) for an ansatz with solved shifts (zero-mass check).
Vec3 zero_mass_defect(const InitialData& data, const CompositeAnsatz& solved);

struct ShiftSolve {
  Shifts shifts;
  double condition = 0.0;
  double residual = 0.0;  ///< |B beta - mass|
  bool family1_active = true;
  bool family3_active = true;
};

/// Solves beta1 r1 + beta2 r2 + beta3 r3 = mass; zero-strength families are dropped.
ShiftSolve solve_shifts(const Vec3& mass, const CompositeAnsatz& a, double max_condition = 1e10);

template <int N>
struct MJet {
  Jet<N> V, U, Theta, E, P;
  Jet<N> V_t, U_t, E_t;
};

/// Jets in x of (V, U, Theta, E, P) and of the time derivatives of V, U, E.
template <int N>
MJet<N> m_jet(double x, double t, const CompositeAnsatz& a);

struct AnsatzResidual {
  double R1[4];  ///< R1 and its x-derivatives up to order 3
  double R2[4];
  double defect[3];  ///< defects of the three balance laws with (R1)_x, (R2)_x removed
};

AnsatzResidual ansatz_residual(double x, double t, const CompositeAnsatz& a);

/// sup over the given points of |R1(., t)|.
double residual_sup(const CompositeAnsatz& a, double t, const std::vector<double>& xs);

/// Smallest C with sup|R1(t)| <= C [(delta^2 + |b2| delta^{3/2}) e^{-c delta t}
/// + |b2| (1+t)^{-3/2} + e^{-c t}] over the samples.
double residual_envelope_constant(const CompositeAnsatz& a, const std::vector<double>& times,
                                  const std::vector<double>& sups, double c);

struct AntiDerivativeData {
  std::vector<double> x;
  std::vector<double> Phi, Psi, Wbar, W;
  Vec3 right_limit{};  ///< values of (Phi, Psi, Wbar) at +infinity
  double I0 = 0.0;     ///< ||data - M(.,0)||_{H^1 cap L^1} + ||(Phi, Psi, Wbar)||_{L^2}
  double norm_H1L1 = 0.0;
  double norm_L2_anti = 0.0;
};

/// Cumulative integrals of the initial perturbation on the given increasing
/// nodes, with analytic exponential tails to the left. Throws mass_mismatch
/// when the right limit exceeds `tol`.
AntiDerivativeData antiderivative_initial_data(const InitialData& data,
                                               const CompositeAnsatz& solved,
                                               const std::vector<double>& x, double tol = 1e-8);

void write_M_csv(const CompositeAnsatz& a, double t, const std::vector<double>& xs,
                 std::ostream& os, const Metadata& extra = {});
void write_antiderivative_csv(const AntiDerivativeData& d, std::ostream& os,
                              const Metadata& extra = {});

// ---------------------------------------------------------------------------

template <int N>
MJet<N> m_jet(double x, double t, const CompositeAnsatz& a) {
  const GasParams& g = a.gas();
  const PrimState& zm = a.z_m();
  const double Em = zm.theta() + g.kinetic_factor() * zm.u() * zm.u();
  const Shifts& sh = a.shifts();
  const ShockProfile& p1 = a.profile1();
  const ShockProfile& p3 = a.profile3();
  const ProfileJet<N + 1> j1 = profile_jet<N + 1>(p1, x - p1.s * t + sh.beta1);
  const ProfileJet<N + 1> j3 = profile_jet<N + 1>(p3, x - p3.s * t + sh.beta3);
  const DwJet<N> d = dw_jet<N>(a.dw(), x, t);
  auto E_of = [&](const Jet<N + 1>& th, const Jet<N + 1>& u) {
    return th + g.kinetic_factor() * (u * u);
  };
  const Jet<N + 1> E1 = E_of(j1.Theta, j1.U), E3 = E_of(j3.Theta, j3.U);
  MJet<N> m;
  m.V = j1.V.template truncate<N>() + j3.V.template truncate<N>() - zm.v() + (d.v - zm.v());
  m.U = j1.U.template truncate<N>() + j3.U.template truncate<N>() - zm.u() + (d.u - zm.u());
  m.E = E1.template truncate<N>() + E3.template truncate<N>() - Em + (d.E - Em);
  m.Theta = m.E - g.kinetic_factor() * (m.U * m.U);
  m.P = g.R() * m.Theta / m.V;
  m.V_t = -p1.s * j1.V.dx() - p3.s * j3.V.dx() + d.v_t;
  m.U_t = -p1.s * j1.U.dx() - p3.s * j3.U.dx() + d.u_t;
  m.E_t = -p1.s * E1.dx() - p3.s * E3.dx() + d.E_t;
  return m;
}

}  // namespace cwave

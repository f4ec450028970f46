#pragma once

#include <cmath>
#include <ostream>
#include <vector>

#include "cwave/csv.hpp"
#include "cwave/jet.hpp"
#include "cwave/thermo.hpp"

namespace cwave {

/// a = kappa (gamma-1) p_m / (gamma R^2 theta_m).
double coefficient_a(const PrimState& z_m, const GasParams& g);
/// a = kappa (gamma-1) / (gamma R v_m); equal to coefficient_a through p_m = R theta_m / v_m.
double coefficient_a_volume(const PrimState& z_m, const GasParams& g);

/// Heat-kernel diffusion wave of the second field, centred at x = 0 and
/// carrying the mass beta2 in theta.
class DiffusionWave {
 public:
  DiffusionWave(const PrimState& z_m, double beta2, const GasParams& g);

  double beta2() const { return beta2_; }
  double a() const { return a_; }
  const PrimState& z_m() const { return z_m_; }
  const GasParams& gas() const { return g_; }
  double p_m() const { return p_m_; }
  double E_m() const { return E_m_; }
  bool trivial() const { return beta2_ == 0.0; }

  /// Width sqrt(4 a (1+t)) of the kernel at time t.
  double width(double t) const { return std::sqrt(4.0 * a_ * (1.0 + t)); }

 private:
  PrimState z_m_;
  double beta2_;
  GasParams g_;
  double a_;
  double p_m_;
  double E_m_;
};

/// Taylor jet in x of the kernel part Theta~(., t) - theta_m at x.
template <int N>
Jet<N> kernel_jet(const DiffusionWave& dw, double x, double t) {
  Jet<N> j;
  if (dw.trivial()) return j;
  const double sig2 = 2.0 * dw.a() * (1.0 + t);
  const double sig = std::sqrt(sig2);
  const double amp = dw.beta2() / std::sqrt(4.0 * M_PI * dw.a() * (1.0 + t));
  const double y = x / sig;
  const double base = amp * std::exp(-0.5 * y * y);
  // d^n/dx^n e^{-x^2/(2 sig^2)} = (-1)^n sig^{-n} He_n(x/sig) e^{...}
  double he_prev = 1.0, he = y;
  double scale = 1.0, fact = 1.0;
  j.coeff(0) += base;
  for (int n = 1; n <= N; ++n) {
    if (n > 1) {
      const double next = y * he - (n - 1) * he_prev;
      he_prev = he;
      he = next;
    }
    scale *= -1.0 / sig;
    fact *= n;
    j.coeff(n) = base * scale * he / fact;
  }
  return j;
}

/// Taylor jet in x of Theta~(., t) at x.
template <int N>
Jet<N> theta_tilde_jet(const DiffusionWave& dw, double x, double t) {
  return dw.z_m().theta() + kernel_jet<N>(dw, x, t);
}

struct ThetaTilde {
  double value;
  double dx1;
  double dx2;
  double dx3;
  double dt;
};

ThetaTilde theta_tilde(double x, double t, const DiffusionWave& dw);

struct DwState {
  double v;
  double u;
  double theta;
  double E;
  double p;
};

/// (v^D, u^D, theta^D, E^D, p^D) at (x, t). Throws regime if theta^D <= 0.
DwState evaluate_dw(double x, double t, const DiffusionWave& dw);

/// Jets in x of the diffusion wave and of its time derivatives.
template <int N>
struct DwJet {
  Jet<N> theta_tilde;
  Jet<N> v, u, theta, E;
  Jet<N> v_t, u_t, E_t;
  Jet<N> du_x;  ///< (u^D - u_m)_x
};

template <int N>
DwJet<N> dw_jet(const DiffusionWave& dw, double x, double t) {
  const GasParams& g = dw.gas();
  const double R = g.R(), pm = dw.p_m(), a = dw.a();
  const double um = dw.z_m().u(), thm = dw.z_m().theta();
  const Jet<N + 3> K3 = kernel_jet<N + 3>(dw, x, t);
  const Jet<N + 2> Tx = K3.dx();
  const Jet<N + 1> Txx = Tx.dx();
  const Jet<N> Txxx = Txx.dx();
  const Jet<N> K = K3.template truncate<N>();
  DwJet<N> r;
  r.theta_tilde = thm + K;
  const Jet<N> du = (a * R / pm) * Tx.template truncate<N>();
  r.v = dw.z_m().v() + (R / pm) * K;
  r.u = um + du;
  r.theta = r.theta_tilde - g.kinetic_factor() * (du * du);
  r.E = dw.E_m() + K + ((g.gamma() - 1.0) / R * um) * du;
  r.v_t = (R / pm * a) * Txx.template truncate<N>();
  r.u_t = (a * R / pm * a) * Txxx;
  r.E_t = a * Txx.template truncate<N>() + ((g.gamma() - 1.0) / R * um) * r.u_t;
  r.du_x = (a * R / pm) * Txx.template truncate<N>();
  return r;
}

template <int N>
struct DwRemainderJet {
  Jet<N> R1;
  Jet<N> R2;
};

/// Remainders R1^D, R2^D as jets in x. `U` is the velocity multiplying the
/// quadratic term of R2^D; passing u^D makes the energy defect identity exact.
template <int N>
DwRemainderJet<N> remainder_jets(const DiffusionWave& dw, double x, double t, const Jet<N>& U) {
  const GasParams& g = dw.gas();
  const double R = g.R(), pm = dw.p_m(), a = dw.a(), gm1 = g.gamma() - 1.0;
  const double um = dw.z_m().u(), thm = dw.z_m().theta();
  const DwJet<N> d = dw_jet<N>(dw, x, t);
  const Jet<N + 3> K3 = kernel_jet<N + 3>(dw, x, t);
  const Jet<N> K = K3.template truncate<N>();
  const Jet<N> Tx = K3.dx().template truncate<N>();
  const Jet<N> Txx = K3.dx().dx().template truncate<N>();
  const Jet<N> du = d.u - um;
  const Jet<N> quad = (0.5 * gm1) * (du * du) / d.v;
  DwRemainderJet<N> r;
  r.R1 = (R * a * a / pm) * Txx - quad;
  r.R2 = (g.kappa() * pm / R) * (K / (d.theta_tilde * thm)) * Tx -
         quad * U + (R * a * a * um / pm) * Txx +
         (g.kappa() * gm1 / R) * (du * d.du_x) / d.v;
  return r;
}

template <int N>
DwRemainderJet<N> remainder_jets(const DiffusionWave& dw, double x, double t) {
  return remainder_jets<N>(dw, x, t, dw_jet<N>(dw, x, t).u);
}

struct DwRemainders {
  double R1[4];  ///< R1^D and its x-derivatives up to order 3
  double R2[4];
};

/// Remainders with u^D as the velocity in R2^D.
DwRemainders remainders(double x, double t, const DiffusionWave& dw);
/// Remainders with a caller-supplied velocity jet (value and x-derivatives up to 3).
DwRemainders remainders(double x, double t, const DiffusionWave& dw, const Jet<3>& U);

/// Integral of Theta~ - theta_m over the real line at time t (Gauss-Hermite).
double theta_mass(const DiffusionWave& dw, double t);
/// Integral of E^D - E_m over the real line at time t.
double energy_mass(const DiffusionWave& dw, double t);
/// Integral of m^D - m_m in (v, u, E).
Vec3 mass_vector(const DiffusionWave& dw, double t);

/// sup over x of |R1^D| and |R2^D| at time t.
std::pair<double, double> remainder_sup(const DiffusionWave& dw, double t);

struct RemainderEnvelope {
  double exponent_R1 = 0.0;  ///< p in sup|R1^D| ~ (1+t)^{-p}
  double exponent_R2 = 0.0;
  std::vector<double> times;
  std::vector<double> sup_R1;
  std::vector<double> sup_R2;
};

/// Power-law fit of the remainder sups over log-spaced times in [t0, t1].
RemainderEnvelope remainder_envelope(const DiffusionWave& dw, double t0 = 1.0, double t1 = 100.0,
                                     int n_times = 40);

/// Smallest C with |z^D - z_m| <= C |beta2| (1+t)^{-1/2} exp(-c x^2/(1+t)) over the
/// given times, sampled across the kernel.
double gaussian_envelope_constant(const DiffusionWave& dw, double c,
                                  const std::vector<double>& times);

void write_dw_csv(const DiffusionWave& dw, const std::vector<double>& times,
                  const std::vector<double>& xs, std::ostream& os, const Metadata& extra = {});

}  // namespace cwave

#include "cwave/diffusion_wave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cwave/error.hpp"
#include "cwave/fit.hpp"
#include "cwave/quadrature.hpp"

namespace cwave {

double coefficient_a(const PrimState& z_m, const GasParams& g) {
  return g.kappa() * (g.gamma() - 1.0) * pressure(z_m, g) / (g.gamma() * g.R() * g.R() * z_m.theta());
}

double coefficient_a_volume(const PrimState& z_m, const GasParams& g) {
  return g.kappa() * (g.gamma() - 1.0) / (g.gamma() * g.R() * z_m.v());
}

DiffusionWave::DiffusionWave(const PrimState& z_m, double beta2, const GasParams& g)
    : z_m_(z_m),
      beta2_(beta2),
      g_(g),
      a_(coefficient_a_volume(z_m, g)),
      p_m_(pressure(z_m, g)),
      E_m_(z_m.theta() + g.kinetic_factor() * z_m.u() * z_m.u()) {
  if (!std::isfinite(beta2)) fail(ErrorKind::domain, "beta2 must be finite");
  if (a_ == 0.0 && beta2 != 0.0) {
    fail(ErrorKind::out_of_regime, "gamma = 1 gives a = 0; a diffusion wave needs beta2 = 0");
  }
}

ThetaTilde theta_tilde(double x, double t, const DiffusionWave& dw) {
  const Jet<5> j = theta_tilde_jet<5>(dw, x, t);
  return {j.value(), j.derivative(1), j.derivative(2), j.derivative(3), dw.a() * j.derivative(2)};
}

DwState evaluate_dw(double x, double t, const DiffusionWave& dw) {
  const DwJet<0> d = dw_jet<0>(dw, x, t);
  const double theta = d.theta.value();
  if (!(theta > kPositivityFloor) || !(d.v.value() > kPositivityFloor)) {
    std::ostringstream os;
    os << "diffusion-wave temperature not positive at x=" << x << ", t=" << t;
    fail(ErrorKind::regime, os.str());
  }
  const double v = d.v.value();
  return {v, d.u.value(), theta, d.E.value(), dw.gas().R() * theta / v};
}

namespace {

DwRemainders pack(const DwRemainderJet<3>& j) {
  DwRemainders r;
  for (int k = 0; k <= 3; ++k) {
    r.R1[k] = j.R1.derivative(k);
    r.R2[k] = j.R2.derivative(k);
  }
  return r;
}

}  // namespace

DwRemainders remainders(double x, double t, const DiffusionWave& dw) {
  return pack(remainder_jets<3>(dw, x, t));
}

DwRemainders remainders(double x, double t, const DiffusionWave& dw, const Jet<3>& U) {
  return pack(remainder_jets<3>(dw, x, t, U));
}

double theta_mass(const DiffusionWave& dw, double t) {
  if (dw.trivial()) return 0.0;
  return integrate_gaussian_scaled([&](double x) { return kernel_jet<0>(dw, x, t).value(); }, 0.0,
                                   dw.width(t));
}

double energy_mass(const DiffusionWave& dw, double t) {
  if (dw.trivial()) return 0.0;
  return integrate_gaussian_scaled(
      [&](double x) { return dw_jet<0>(dw, x, t).E.value() - dw.E_m(); }, 0.0, dw.width(t));
}

Vec3 mass_vector(const DiffusionWave& dw, double t) {
  if (dw.trivial()) return {0.0, 0.0, 0.0};
  const double w = dw.width(t);
  const double vm = dw.z_m().v(), um = dw.z_m().u();
  const double mv = integrate_gaussian_scaled(
      [&](double x) { return dw_jet<0>(dw, x, t).v.value() - vm; }, 0.0, w);
  const double mu = integrate_gaussian_scaled(
      [&](double x) { return dw_jet<0>(dw, x, t).u.value() - um; }, 0.0, w);
  return {mv, mu, energy_mass(dw, t)};
}

std::pair<double, double> remainder_sup(const DiffusionWave& dw, double t) {
  double s1 = 0.0, s2 = 0.0;
  const double w = dw.width(t);
  const int n = 4001;
  for (int i = 0; i < n; ++i) {
    const double x = w * (-6.0 + 12.0 * i / (n - 1));
    const DwRemainderJet<0> r = remainder_jets<0>(dw, x, t);
    s1 = std::max(s1, std::abs(r.R1.value()));
    s2 = std::max(s2, std::abs(r.R2.value()));
  }
  return {s1, s2};
}

RemainderEnvelope remainder_envelope(const DiffusionWave& dw, double t0, double t1, int n_times) {
  RemainderEnvelope e;
  for (int i = 0; i < n_times; ++i) {
    const double t = t0 * std::pow(t1 / t0, static_cast<double>(i) / (n_times - 1));
    const auto [a, b] = remainder_sup(dw, t);
    e.times.push_back(t);
    e.sup_R1.push_back(a);
    e.sup_R2.push_back(b);
  }
  e.exponent_R1 = power_decay_exponent(e.times, e.sup_R1);
  e.exponent_R2 = power_decay_exponent(e.times, e.sup_R2);
  return e;
}

double gaussian_envelope_constant(const DiffusionWave& dw, double c,
                                  const std::vector<double>& times) {
  if (dw.trivial()) return 0.0;
  double C = 0.0;
  const PrimState& zm = dw.z_m();
  for (double t : times) {
    const double w = dw.width(t);
    for (int i = 0; i <= 2000; ++i) {
      const double x = w * (-8.0 + 16.0 * i / 2000.0);
      const DwState z = evaluate_dw(x, t, dw);
      const double dev = std::max(
          {std::abs(z.v - zm.v()), std::abs(z.u - zm.u()), std::abs(z.theta - zm.theta())});
      const double env =
          std::abs(dw.beta2()) / std::sqrt(1.0 + t) * std::exp(-c * x * x / (1.0 + t));
      C = std::max(C, dev / env);
    }
  }
  return C;
}

void write_dw_csv(const DiffusionWave& dw, const std::vector<double>& times,
                  const std::vector<double>& xs, std::ostream& os, const Metadata& extra) {
  Metadata meta = extra;
  meta.emplace_back("beta2", fmt_double(dw.beta2()));
  meta.emplace_back("a", fmt_double(dw.a()));
  write_csv_header(os, meta, {"t", "x", "vD", "uD", "thetaD", "R1D", "R2D"});
  for (double t : times) {
    for (double x : xs) {
      const DwState z = evaluate_dw(x, t, dw);
      const DwRemainderJet<0> r = remainder_jets<0>(dw, x, t);
      write_csv_row(os, {t, x, z.v, z.u, z.theta, r.R1.value(), r.R2.value()});
    }
  }
}

}  // namespace cwave

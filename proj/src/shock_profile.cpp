#include "cwave/shock_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "cwave/error.hpp"

namespace cwave {
namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::array<double, 1>;

struct FluxParams {
  double s;
  double v_ref;
  double p_ref;
  double w_outer;
};

FluxParams flux_params(const ShockData& sd, const GasParams& g) {
  const PrimState& zr = sd.intermediate();
  return {sd.s, zr.v(), pressure(zr, g), sd.outer().v() - zr.v()};
}

void check_denominator(double w, const FluxParams& f) {
  const double s2 = f.s * f.s;
  if (std::abs(f.p_ref - s2 * f.v_ref - 2.0 * s2 * w) < 1e-10) {
    std::ostringstream os;
    os << "profile flux denominator vanishes at V = " << f.v_ref + w;
    fail(ErrorKind::singular_flux, os.str());
  }
}

double h_of(double w, const FluxParams& f, const GasParams& g) {
  return h_of_w(w, f.s, f.v_ref, f.p_ref, f.w_outer, g);
}

// One direction of the profile integration, starting from the anchor.
// `target` is the end volume approached; y = V - target is integrated so that
// the relative tolerance keeps resolving the tail.
struct Leg {
  std::vector<double> xi;
  std::vector<double> w;  // V - v_ref
  bool truncated = false;
};

Leg integrate_leg(double w0, double w_target, double direction, const FluxParams& f,
                  const GasParams& g, double delta, const ProfileOptions& opts) {
  Leg leg;
  const double kappa = g.kappa();
  auto rhs = [&](const OdeState& y, OdeState& dydx, double) {
    dydx[0] = h_of(y[0] + w_target, f, g) / kappa;
  };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<OdeState>>(
      opts.rtol * opts.tail_tol * delta, opts.rtol);
  OdeState y{w0 - w_target};
  double x = 0.0;
  double dt = direction * std::min(1e-3, opts.h_max);
  const double stop = opts.tail_tol * delta;
  long steps = 0;
  while (std::abs(y[0]) >= stop) {
    if (++steps > opts.max_steps || std::abs(x) > opts.xi_max || std::abs(dt) < 1e-14) {
      leg.truncated = true;
      break;
    }
    const odeint::controlled_step_result res = stepper.try_step(rhs, y, x, dt);
    if (res == odeint::success) {
      leg.xi.push_back(x);
      leg.w.push_back(y[0] + w_target);
      check_denominator(y[0] + w_target, f);
    }
    if (std::abs(dt) > opts.h_max) dt = direction * opts.h_max;
  }
  return leg;
}

ShockProfile constant_profile(const ShockData& sd, const GasParams& g) {
  ShockProfile p;
  p.family = sd.family;
  p.s = sd.s;
  p.left_state = sd.left;
  p.right_state = sd.right;
  p.delta = 0.0;
  p.gas = g;
  const PrimState& z = sd.intermediate();
  p.xi = {0.0};
  p.V = {z.v()};
  p.U = {z.u()};
  p.Theta = {z.theta()};
  p.V_xi = {0.0};
  return p;
}

// Least-squares slope of log|V - end| against xi over samples whose relative
// distance to `end` lies in [lo, hi].
double tail_log_slope(const ShockProfile& p, double end, bool left_side, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    if ((p.xi[i] < 0) != left_side) continue;
    const double r = std::abs(p.V[i] - end) / p.delta;
    if (r < lo || r > hi) continue;
    const double x = p.xi[i], yv = std::log(std::abs(p.V[i] - end));
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
    ++n;
  }
  if (n < 3) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DecayFit fit_decay(const ShockProfile& p) {
  DecayFit f;
  if (p.constant()) return f;
  ShockData sd{p.family, p.s, p.left_state, p.right_state, p.delta};
  f.rate_left = h_flux_derivative(p.left_state.v(), sd, p.gas) / p.gas.kappa();
  f.rate_right = h_flux_derivative(p.right_state.v(), sd, p.gas) / p.gas.kappa();
  f.fitted_rate_left = tail_log_slope(p, p.left_state.v(), true, 1e-8, 1e-3);
  f.fitted_rate_right = tail_log_slope(p, p.right_state.v(), false, 1e-8, 1e-3);
  f.c = 0.9 * std::min(std::abs(f.rate_left), std::abs(f.rate_right)) / p.delta;
  const double R = p.gas.R();
  const PrimState& zr = p.intermediate();
  const double s2 = p.s * p.s;
  const double pr = pressure(zr, p.gas);
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    const double env = std::exp(-f.c * p.delta * std::abs(p.xi[i]));
    const double end = p.xi[i] < 0 ? p.left_state.v() : p.right_state.v();
    f.C_value = std::max(f.C_value, std::abs(p.V[i] - end) / (p.delta * env));
    f.C_deriv = std::max(f.C_deriv, std::abs(p.V_xi[i]) / (p.delta * p.delta * env));
    const double w = p.V[i] - zr.v();
    f.C_theta = std::max(f.C_theta, std::abs(-2.0 * s2 * w + pr - s2 * zr.v()) / R);
  }
  return f;
}

ShockProfile integrate_family1(const ShockData& sd, const GasParams& g,
                               const ProfileOptions& opts) {
  const FluxParams f = flux_params(sd, g);
  const double w_left = sd.left.v() - f.v_ref;  // > 0
  const double w0 = 0.5 * w_left;
  check_denominator(0.0, f);
  check_denominator(w_left, f);

  const Leg fwd = integrate_leg(w0, 0.0, +1.0, f, g, sd.delta, opts);
  const Leg bwd = integrate_leg(w0, w_left, -1.0, f, g, sd.delta, opts);

  ShockProfile p;
  p.family = 1;
  p.s = sd.s;
  p.left_state = sd.left;
  p.right_state = sd.right;
  p.delta = sd.delta;
  p.gas = g;
  const std::size_t n = fwd.xi.size() + bwd.xi.size() + 1;
  p.xi.reserve(n);
  p.V.reserve(n);
  for (std::size_t i = bwd.xi.size(); i-- > 0;) {
    p.xi.push_back(bwd.xi[i]);
    p.V.push_back(bwd.w[i] + f.v_ref);
  }
  p.xi.push_back(0.0);
  p.V.push_back(w0 + f.v_ref);
  for (std::size_t i = 0; i < fwd.xi.size(); ++i) {
    p.xi.push_back(fwd.xi[i]);
    p.V.push_back(fwd.w[i] + f.v_ref);
  }
  p.V_xi.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.V_xi[i] = h_of(p.V[i] - f.v_ref, f, g) / g.kappa();

  if (fwd.truncated || bwd.truncated) {
    p.warnings.push_back("profile tail truncated before reaching the tail tolerance");
  }
  p.lambda_left = p.V_xi.front() / (p.V.front() - sd.left.v());
  p.lambda_right = p.V_xi.back() / (p.V.back() - sd.right.v());
  recover_velocity_temperature(p);
  p.decay_fit = fit_decay(p);
  return p;
}

}  // namespace

double h_flux(double V, const ShockData& sd, const GasParams& g) {
  const FluxParams f = flux_params(sd, g);
  check_denominator(V - f.v_ref, f);
  return h_of(V - f.v_ref, f, g);
}

double h_flux_derivative(double V, const ShockData& sd, const GasParams& g) {
  const FluxParams f = flux_params(sd, g);
  check_denominator(V - f.v_ref, f);
  const Jet<1> w = Jet<1>::variable(V - f.v_ref);
  return h_of_w(w, f.s, f.v_ref, f.p_ref, f.w_outer, g).coeff(1);
}

ShockProfile integrate_profile(const ShockData& sd, const GasParams& g,
                               const ProfileOptions& opts) {
  if (sd.zero_strength()) return constant_profile(sd, g);
  if (!(g.gamma() > 1.0)) fail(ErrorKind::out_of_regime, "shock profile requires gamma > 1");
  const ShockData one = sd.family == 1 ? sd : sd.reflected();
  const PrimState& zm = one.right;
  const PrimState& zo = one.left;
  const double s2 = one.s * one.s;
  const double pm = pressure(zm, g), po = pressure(zo, g);
  if (!(pm < s2 * zm.v() && s2 * zm.v() < g.gamma() * pm && g.gamma() * po < s2 * zo.v())) {
    fail(ErrorKind::regime, "profile sign conditions fail for this shock");
  }
  ShockProfile p = integrate_family1(one, g, opts);
  return sd.family == 1 ? p : reflect(p);
}

ShockProfile reflect(const ShockProfile& in) {
  ShockProfile p = in;
  p.family = 4 - in.family;
  p.s = -in.s;
  p.left_state = in.right_state.reflected();
  p.right_state = in.left_state.reflected();
  const std::size_t n = in.xi.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    p.xi[i] = in.xi[j] == 0.0 ? 0.0 : -in.xi[j];
    p.V[i] = in.V[j];
    p.U[i] = -in.U[j];
    p.Theta[i] = in.Theta[j];
    p.V_xi[i] = -in.V_xi[j];
  }
  p.lambda_left = -in.lambda_right;
  p.lambda_right = -in.lambda_left;
  DecayFit& f = p.decay_fit;
  f.rate_left = -in.decay_fit.rate_right;
  f.rate_right = -in.decay_fit.rate_left;
  f.fitted_rate_left = -in.decay_fit.fitted_rate_right;
  f.fitted_rate_right = -in.decay_fit.fitted_rate_left;
  return p;
}

ProfileSample recover_from_V(const ShockProfile& p, double V) {
  const PrimState& zr = p.intermediate();
  const double w = V - zr.v();
  const double s2 = p.s * p.s;
  const double pr = pressure(zr, p.gas);
  return {V, zr.u() - p.s * w, zr.theta() + (-s2 * w * w + (pr - s2 * zr.v()) * w) / p.gas.R()};
}

void recover_velocity_temperature(ShockProfile& p) {
  const std::size_t n = p.V.size();
  p.U.resize(n);
  p.Theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ProfileSample z = recover_from_V(p, p.V[i]);
    if (!(z.Theta > kPositivityFloor)) {
      fail(ErrorKind::regime, "recovered profile temperature not positive");
    }
    p.U[i] = z.U;
    p.Theta[i] = z.Theta;
  }
}

double evaluate_V(const ShockProfile& p, double xi) {
  const std::size_t n = p.xi.size();
  if (p.constant()) return p.V[0];
  if (xi <= p.xi.front()) {
    const double end = p.left_state.v();
    return end + (p.V.front() - end) * std::exp(p.lambda_left * (xi - p.xi.front()));
  }
  if (xi >= p.xi.back()) {
    const double end = p.right_state.v();
    return end + (p.V.back() - end) * std::exp(p.lambda_right * (xi - p.xi.back()));
  }
  const std::size_t k =
      static_cast<std::size_t>(std::upper_bound(p.xi.begin(), p.xi.end(), xi) - p.xi.begin());
  const std::size_t i = std::min(k, n - 1) - 1;
  const double h = p.xi[i + 1] - p.xi[i];
  const double t = (xi - p.xi[i]) / h;
  const double secant = (p.V[i + 1] - p.V[i]) / h;
  double m0 = p.V_xi[i], m1 = p.V_xi[i + 1];
  if (secant == 0.0) {
    m0 = m1 = 0.0;
  } else {
    const double a = m0 / secant, b = m1 / secant;
    if (a < 0.0) m0 = 0.0;
    if (b < 0.0) m1 = 0.0;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      m0 = tau * a * secant;
      m1 = tau * b * secant;
    }
  }
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p.V[i] + (t3 - 2 * t2 + t) * h * m0 +
         (-2 * t3 + 3 * t2) * p.V[i + 1] + (t3 - t2) * h * m1;
}

ProfileSample evaluate(const ShockProfile& p, double xi) {
  return recover_from_V(p, evaluate_V(p, xi));
}

ProfileReport validate_profile(const ShockProfile& p) {
  ProfileReport r;
  const GasParams& g = p.gas;
  const PrimState& zm = p.intermediate();
  const PrimState& zo = p.outer();
  const double s2 = p.s * p.s;
  const double pm = pressure(zm, g), po = pressure(zo, g);
  r.fit = p.decay_fit;
  if (p.constant()) {
    r.chain_a = r.chain_b = r.monotone = r.envelopes = r.compressive = true;
    return r;
  }
  r.chain_a = pm < s2 * zm.v() && s2 * zm.v() < g.gamma() * pm;
  r.chain_b = po < g.gamma() * po && g.gamma() * po < s2 * zo.v();
  r.compressive = p.s * (p.right_state.v() - p.left_state.v()) > 0.0;
  const double sign = p.right_state.v() < p.left_state.v() ? -1.0 : 1.0;
  r.monotone = true;
  for (std::size_t i = 1; i < p.V.size(); ++i) {
    if (!(sign * (p.V[i] - p.V[i - 1]) > 0.0)) r.monotone = false;
    const double dv = p.V[i] - p.V[i - 1];
    r.u_relation_defect =
        std::max(r.u_relation_defect, std::abs((p.U[i] - p.U[i - 1]) + p.s * dv) / p.delta);
  }
  const ProfileSample at_outer = recover_from_V(p, zo.v());
  r.end_state_error =
      std::max(std::abs(at_outer.U - zo.u()), std::abs(at_outer.Theta - zo.theta()));
  r.tail_distance = std::max(std::abs(p.V.front() - p.left_state.v()),
                             std::abs(p.V.back() - p.right_state.v())) /
                    p.delta;
  const DecayFit& f = p.decay_fit;
  r.envelopes = f.c > 0.0 && std::isfinite(f.C_value) && std::isfinite(f.C_deriv) &&
                std::isfinite(f.C_theta);
  return r;
}

void write_profile_csv(const ShockProfile& p, std::ostream& os, const Metadata& extra) {
  Metadata meta = extra;
  meta.emplace_back("family", std::to_string(p.family));
  meta.emplace_back("s", fmt_double(p.s));
  meta.emplace_back("delta", fmt_double(p.delta));
  meta.emplace_back("anchor", p.normalization);
  meta.emplace_back("decay_c", fmt_double(p.decay_fit.c));
  meta.emplace_back("decay_C_value", fmt_double(p.decay_fit.C_value));
  meta.emplace_back("decay_C_deriv", fmt_double(p.decay_fit.C_deriv));
  write_csv_header(os, meta, {"xi", "V", "U", "Theta"});
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    write_csv_row(os, {p.xi[i], p.V[i], p.U[i], p.Theta[i]});
  }
}

}  // namespace cwave

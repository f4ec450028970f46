#include "cwave/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "cwave/error.hpp"

namespace cwave {
namespace {

struct HugoniotPoint {
  double s2;      // squared shock speed
  double theta;   // temperature at the new volume
  double d;       // ((gamma-1)/2)(v_new - v_known)/v_new
};

// Closed-form Hugoniot relation: given a state on one side and the volume on
// the other side, returns s^2 and the temperature there. The relation is
// symmetric, so it serves both the forward 1-locus and the mirrored 3-locus.
HugoniotPoint hugoniot(const PrimState& known, double v_new, const GasParams& g) {
  const double d = 0.5 * (g.gamma() - 1.0) * (v_new - known.v()) / v_new;
  if (!(std::abs(d) < 1.0)) {
    std::ostringstream os;
    os << "|d| = " << std::abs(d) << " >= 1 for v = " << v_new;
    fail(ErrorKind::out_of_regime, os.str());
  }
  const double ratio = d / (1.0 + d);
  const double p_known = pressure(known, g);
  HugoniotPoint h;
  h.d = d;
  h.s2 = g.gamma() * p_known / v_new * (1.0 - ratio);
  h.theta = known.theta() * (1.0 - (known.v() + v_new) / known.v() * ratio);
  return h;
}

// Right state of the 1-shock issued from `left` with right volume v (v <= v_left).
PrimState one_shock_right(const PrimState& left, double v, const GasParams& g, double* s_out) {
  const HugoniotPoint h = hugoniot(left, v, g);
  const double s = -std::sqrt(h.s2);
  if (s_out) *s_out = s;
  if (!(h.theta > kPositivityFloor)) fail(ErrorKind::regime, "1-locus temperature not positive");
  return PrimState(v, left.u() - s * (v - left.v()), h.theta);
}

// Left state of the 3-shock ending at `right` with left volume v (v <= v_right),
// obtained by reflecting the 1-locus.
PrimState three_shock_left(const PrimState& right, double v, const GasParams& g) {
  return one_shock_right(right.reflected(), v, g, nullptr).reflected();
}

double max_abs_diff(const PrimState& a, const PrimState& b) {
  return std::max({std::abs(a.v() - b.v()), std::abs(a.u() - b.u()),
                   std::abs(a.theta() - b.theta())});
}

double euclid_diff(const PrimState& a, const PrimState& b) {
  return std::hypot(a.v() - b.v(), a.u() - b.u(), a.theta() - b.theta());
}

}  // namespace

double jump_strength(const PrimState& a, const PrimState& b) {
  return std::abs(a.v() - b.v()) + std::abs(a.u() - b.u()) + std::abs(a.theta() - b.theta());
}

ShockData ShockData::reflected() const {
  return ShockData{4 - family, -s, right.reflected(), left.reflected(), delta};
}

ShockData ShockData::trivial(int family, const PrimState& z, const GasParams& g) {
  const double c = sound_speed(z, g);
  return ShockData{family, family == 1 ? -c : c, z, z, 0.0};
}

ShockData shock_locus_1(const PrimState& z_minus, double v_m, const GasParams& g) {
  if (!(v_m < z_minus.v())) {
    fail(ErrorKind::not_compressive, "1-shock requires v_m < v_-");
  }
  if (!(v_m > kPositivityFloor)) fail(ErrorKind::domain, "v_m must be positive");
  double s = 0.0;
  const PrimState z_m = one_shock_right(z_minus, v_m, g, &s);
  return ShockData{1, s, z_minus, z_m, jump_strength(z_minus, z_m)};
}

ShockData shock_locus_3(const PrimState& z_m, double v_plus, const GasParams& g) {
  if (!(v_plus > z_m.v())) {
    fail(ErrorKind::not_compressive, "3-shock requires v_+ > v_m");
  }
  // The mirrored problem is a 1-shock whose right state is reflect(z_m) and
  // whose left volume is v_+.
  const PrimState mirrored_right = z_m.reflected();
  const HugoniotPoint h = hugoniot(mirrored_right, v_plus, g);
  const double s_mirror = -std::sqrt(h.s2);
  const double u_left_mirror =
      mirrored_right.u() + s_mirror * (mirrored_right.v() - v_plus);
  if (!(h.theta > kPositivityFloor)) fail(ErrorKind::regime, "3-locus temperature not positive");
  const PrimState z_plus(v_plus, -u_left_mirror, h.theta);
  return ShockData{3, -s_mirror, z_m, z_plus, jump_strength(z_m, z_plus)};
}

namespace {

TwoShockSolution assemble(const ShockData& shock1, const ShockData& shock3, const GasParams& g,
                          const RiemannOptions& opts) {
  const PrimState& z_minus = shock1.left;
  const PrimState& z_m = shock1.right;
  const PrimState& z_plus = shock3.right;
  TwoShockSolution sol{z_minus, z_m, z_plus, shock1, shock3};
  sol.s1 = shock1.s;
  sol.s3 = shock3.s;
  sol.delta1 = shock1.delta;
  sol.delta3 = shock3.delta;
  sol.delta = std::min(sol.delta1, sol.delta3);
  sol.d_minus = 0.5 * (g.gamma() - 1.0) * (z_m.v() - z_minus.v()) / z_m.v();
  const double span = euclid_diff(z_plus, z_minus);
  sol.locus_constant = span > 0.0 ? (sol.delta1 + sol.delta3) / span : 0.0;
  sol.same_order = sol.delta > 0.0 && sol.delta1 + sol.delta3 <= opts.ratio_bound * sol.delta;
  sol.within_omega = span <= opts.omega_radius;
  if (!sol.within_omega) {
    std::ostringstream os;
    os << "|z_+ - z_-| = " << span << " exceeds the neighbourhood radius " << opts.omega_radius;
    sol.warning = os.str();
  }
  return sol;
}

}  // namespace

TwoShockSolution build_two_shock(const PrimState& z_minus, double v_m, double v_plus,
                                 const GasParams& g, const RiemannOptions& opts) {
  if (!(g.gamma() > 1.0)) fail(ErrorKind::out_of_regime, "two-shock construction needs gamma > 1");
  const ShockData shock1 =
      v_m == z_minus.v() ? ShockData::trivial(1, z_minus, g) : shock_locus_1(z_minus, v_m, g);
  const PrimState& z_m = shock1.right;
  const ShockData shock3 =
      v_plus == z_m.v() ? ShockData::trivial(3, z_m, g) : shock_locus_3(z_m, v_plus, g);
  return assemble(shock1, shock3, g, opts);
}

TwoShockSolution solve_two_shock(const PrimState& z_minus, const PrimState& z_plus,
                                 const GasParams& g, const RiemannOptions& opts) {
  if (!(g.gamma() > 1.0)) fail(ErrorKind::out_of_regime, "two-shock construction needs gamma > 1");
  const double scale = 1.0 + std::max({std::abs(z_minus.v()), std::abs(z_minus.u()),
                                       std::abs(z_minus.theta())});
  if (max_abs_diff(z_minus, z_plus) <= 1e-15 * scale) {
    fail(ErrorKind::degenerate, "z_+ equals z_-: no shocks to build");
  }
  if (!(z_plus.u() < z_minus.u())) {
    fail(ErrorKind::wrong_wave_pattern, "entropy violation: two compressive shocks need u_+ < u_-");
  }

  // Mismatch in velocity between the forward 1-locus and the backward 3-locus.
  auto mismatch = [&](double v) {
    const PrimState a =
        v == z_minus.v() ? z_minus : one_shock_right(z_minus, v, g, nullptr);
    const PrimState b = v == z_plus.v() ? z_plus : three_shock_left(z_plus, v, g);
    return a.u() - b.u();
  };

  const double hi = std::min(z_minus.v(), z_plus.v());
  const double lo = std::max(z_minus.v(), z_plus.v()) * (g.gamma() - 1.0) / (g.gamma() + 1.0) *
                        (1.0 + 1e-6) +
                    kPositivityFloor;
  if (!(lo < hi)) fail(ErrorKind::no_two_shock_solution, "empty compression bracket");
  const double f_hi = mismatch(hi);
  if (f_hi < 0.0) {
    fail(ErrorKind::wrong_wave_pattern, "end states require a rarefaction, not two shocks");
  }
  double v_m = hi;
  if (f_hi > 0.0) {
    const double f_lo = mismatch(lo);
    if (!(f_lo < 0.0)) fail(ErrorKind::no_two_shock_solution, "no sign change on the bracket");
    std::uintmax_t max_iter = 200;
    const auto root = boost::math::tools::toms748_solve(
        mismatch, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    if (max_iter >= 200) fail(ErrorKind::no_two_shock_solution, "root finder did not converge");
    v_m = 0.5 * (root.first + root.second);
    if (hi - v_m <= 1e-13 * hi) v_m = hi;
  }

  const double v_plus = z_plus.v();
  const ShockData shock1 =
      v_m == z_minus.v() ? ShockData::trivial(1, z_minus, g) : shock_locus_1(z_minus, v_m, g);
  const PrimState& z_m = shock1.right;
  ShockData shock3 =
      v_plus == z_m.v() ? ShockData::trivial(3, z_m, g) : shock_locus_3(z_m, v_plus, g);

  const double miss = max_abs_diff(shock3.right, z_plus);
  if (miss > 1e-9 * scale) {
    std::ostringstream os;
    os << "z_+ is off the two-shock surface (state mismatch " << miss << ")";
    fail(ErrorKind::no_two_shock_solution, os.str());
  }
  if (!shock3.zero_strength()) {
    shock3.right = z_plus;
    shock3.delta = jump_strength(z_m, z_plus);
  }
  for (const ShockData* sd : std::initializer_list<const ShockData*>{&shock1, &shock3}) {
    const Vec3 r = rh_residual(*sd, g);
    const double worst = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
    if (worst > opts.rh_tol) {
      std::ostringstream os;
      os << "Rankine-Hugoniot residual " << worst << " above tolerance";
      fail(ErrorKind::no_two_shock_solution, os.str());
    }
  }

  TwoShockSolution sol = assemble(shock1, shock3, g, opts);
  const EntropyReport e = check_entropy(sol, g);
  if ((!shock1.zero_strength() && !e.lax_1) || (!shock3.zero_strength() && !e.lax_3)) {
    fail(ErrorKind::wrong_wave_pattern, "Lax entropy condition violated");
  }
  return sol;
}

Vec3 rh_residual(const ShockData& sd, const GasParams& g) {
  if (sd.left == sd.right) return {0.0, 0.0, 0.0};
  const PrimState& l = sd.left;
  const PrimState& r = sd.right;
  const double pl = pressure(l, g);
  const double pr = pressure(r, g);
  const double el = l.internal_energy(g) + 0.5 * l.u() * l.u();
  const double er = r.internal_energy(g) + 0.5 * r.u() * r.u();
  return {-sd.s * (r.v() - l.v()) - (r.u() - l.u()), -sd.s * (r.u() - l.u()) + (pr - pl),
          -sd.s * (er - el) + (pr * r.u() - pl * l.u())};
}

Strengths strengths(const TwoShockSolution& sol) {
  Strengths s;
  s.delta1 = jump_strength(sol.z_m, sol.z_minus);
  s.delta3 = jump_strength(sol.z_m, sol.z_plus);
  s.delta = std::min(s.delta1, s.delta3);
  return s;
}

EntropyReport check_entropy(const TwoShockSolution& sol, const GasParams& g) {
  EntropyReport r;
  const double lam_minus = sound_speed(sol.z_minus, g);
  const double lam_m = sound_speed(sol.z_m, g);
  const double lam_plus = sound_speed(sol.z_plus, g);
  r.lax_1 = -lam_minus > sol.s1 && sol.s1 > -lam_m;
  r.lax_3 = lam_m > sol.s3 && sol.s3 > lam_plus;
  r.velocity_order = sol.z_minus.u() > sol.z_m.u() && sol.z_m.u() > sol.z_plus.u();

  const double gam = g.gamma();
  const double p_minus = pressure(sol.z_minus, g);
  const double p_m = pressure(sol.z_m, g);
  const double p_plus = pressure(sol.z_plus, g);
  const double s1sq = sol.s1 * sol.s1;
  const double s3sq = sol.s3 * sol.s3;
  r.sign_chain_1a = p_m < s1sq * sol.z_m.v() && s1sq * sol.z_m.v() < gam * p_m;
  r.sign_chain_1b = p_minus < gam * p_minus && gam * p_minus < s1sq * sol.z_minus.v();
  r.sign_chain_3a = p_m < s3sq * sol.z_m.v() && s3sq * sol.z_m.v() < gam * p_m;
  r.sign_chain_3b = p_plus < gam * p_plus && gam * p_plus < s3sq * sol.z_plus.v();
  return r;
}

}  // namespace cwave

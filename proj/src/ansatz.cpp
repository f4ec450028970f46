#include "cwave/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "cwave/error.hpp"
#include "cwave/quadrature.hpp"

namespace cwave {
namespace {

double energy_of(const PrimState& z, const GasParams& g) {
  return z.theta() + g.kinetic_factor() * z.u() * z.u();
}

Vec3 diff3(const PrimState& a, const PrimState& b, const GasParams& g) {
  return {a.v() - b.v(), a.u() - b.u(), energy_of(a, g) - energy_of(b, g)};
}

Vec3& operator+=(Vec3& a, const Vec3& b) {
  for (int i = 0; i < 3; ++i) a[i] += b[i];
  return a;
}

Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

// Symmetric 7-point Gauss-Legendre rule on [-1, 1].
struct GL7 {
  double x[7];
  double w[7];
  GL7() {
    using Rule = boost::math::quadrature::gauss<double, 7>;
    const auto& ab = Rule::abscissa();
    const auto& wt = Rule::weights();
    int k = 0;
    for (std::size_t i = 0; i < ab.size(); ++i) {
      x[k] = ab[i];
      w[k++] = wt[i];
      if (ab[i] != 0.0) {
        x[k] = -ab[i];
        w[k++] = wt[i];
      }
    }
  }
};

const GL7& gl7() {
  static const GL7 rule;
  return rule;
}

template <class F>
Vec3 gl_integrate(const F& f, double a, double b) {
  const GL7& r = gl7();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  Vec3 acc{0.0, 0.0, 0.0};
  for (int i = 0; i < 7; ++i) acc += (r.w[i] * half) * f(mid + half * r.x[i]);
  return acc;
}

Vec3 profile_m(const ShockProfile& p, double xi, double e_scale) {
  const ProfileSample z = evaluate(p, xi);
  return {z.V, z.U, e_scale * (z.Theta + p.gas.kinetic_factor() * z.U * z.U)};
}

// Integral over (-inf, upper] of m(x + ba) - m(x + bb) for one profile.
// Between merged (shifted) sample nodes both terms are smooth; beyond the
// samples both are exact exponentials, integrated in closed form.
Vec3 profile_shift_partial(const ShockProfile& p, double ba, double bb, double upper,
                           double e_scale) {
  Vec3 acc{0.0, 0.0, 0.0};
  if (p.constant() || ba == bb) return acc;
  auto f = [&](double x) { return profile_m(p, x + ba, e_scale) - profile_m(p, x + bb, e_scale); };
  std::vector<double> br;
  br.reserve(2 * p.xi.size());
  for (double xi : p.xi) {
    br.push_back(xi - ba);
    br.push_back(xi - bb);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  const double xl = br.front(), xr = br.back();

  if (upper <= xl) {
    // Entirely inside the left exponential tail.
    return (1.0 / p.lambda_left) * f(upper);
  }
  acc += (1.0 / p.lambda_left) * f(xl);
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i];
    if (a >= upper) break;
    const double b = std::min(br[i + 1], upper);
    acc += gl_integrate(f, a, b);
  }
  if (upper > xr) {
    // Right tail from xr to upper (upper may be +inf).
    const Vec3 fr = f(xr);
    const double lam = p.lambda_right;
    const double frac = std::isinf(upper) ? -1.0 : std::expm1(lam * (upper - xr));
    acc += (frac / lam) * fr;
  }
  return acc;
}

Vec3 bumps_partial(const std::vector<Bump>& bumps, double lo, double hi, double e_scale) {
  Vec3 acc{0.0, 0.0, 0.0};
  for (const Bump& b : bumps) {
    const double a = std::max(lo, b.lo()), c = std::min(hi, b.hi());
    if (!(c > a)) continue;
    const int pieces = 4;
    for (int k = 0; k < pieces; ++k) {
      const double x0 = a + (c - a) * k / pieces, x1 = a + (c - a) * (k + 1) / pieces;
      acc += gl_integrate(
          [&](double x) {
            Vec3 v = b.value(x);
            v[2] *= e_scale;
            return v;
          },
          x0, x1);
    }
  }
  return acc;
}

// Integral over [lo, hi] of the difference of two diffusion waves at t = 0.
Vec3 dw_partial(const DiffusionWave& A, const DiffusionWave& B, double lo, double hi,
                double e_scale) {
  Vec3 acc{0.0, 0.0, 0.0};
  if (A.beta2() == B.beta2()) return acc;
  const double w = std::max(A.trivial() ? 0.0 : A.width(0.0), B.trivial() ? 0.0 : B.width(0.0));
  const double a = std::max(lo, -14.0 * w), b = std::min(hi, 14.0 * w);
  if (!(b > a)) return acc;
  for (int c = 0; c < 3; ++c) {
    acc[c] = integrate_interval(
        [&](double x) {
          const DwJet<0> ja = dw_jet<0>(A, x, 0.0), jb = dw_jet<0>(B, x, 0.0);
          if (c == 0) return ja.v.value() - jb.v.value();
          if (c == 1) return ja.u.value() - jb.u.value();
          return e_scale * (ja.E.value() - jb.E.value());
        },
        a, b, 1e-14);
  }
  return acc;
}

void check_same_far_fields(const CompositeAnsatz& A, const CompositeAnsatz& B) {
  const GasParams& g = A.gas();
  const Vec3 dl = diff3(A.solution().z_minus, B.solution().z_minus, g);
  const Vec3 dr = diff3(A.solution().z_plus, B.solution().z_plus, g);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(dl[i]) > 1e-12 || std::abs(dr[i]) > 1e-12) {
      fail(ErrorKind::divergence, "data and composite wave have different far fields");
    }
  }
}

// Integral over R of m_A(x, 0) - m_B(x, 0) plus the bumps.
Vec3 difference_mass(const CompositeAnsatz& A, const CompositeAnsatz& B,
                     const std::vector<Bump>& bumps, double e_scale = 1.0) {
  check_same_far_fields(A, B);
  const double inf = std::numeric_limits<double>::infinity();
  Vec3 m = profile_shift_partial(A.profile1(), A.shifts().beta1, B.shifts().beta1, inf, e_scale);
  m += profile_shift_partial(A.profile3(), A.shifts().beta3, B.shifts().beta3, inf, e_scale);
  if (A.dw().beta2() != B.dw().beta2()) {
    Vec3 ma = mass_vector(A.dw(), 0.0), mb = mass_vector(B.dw(), 0.0);
    ma[2] *= e_scale;
    mb[2] *= e_scale;
    m += ma - mb;
  }
  m += bumps_partial(bumps, -inf, inf, e_scale);
  return m;
}

}  // namespace

Bump Bump::with_mass(double center, double half_width, const Vec3& mass) {
  Bump b;
  b.center = center;
  b.half_width = half_width;
  const double unit = half_width * 256.0 / 315.0;
  b.amplitude = {mass[0] / unit, mass[1] / unit, mass[2] / unit};
  return b;
}

Vec3 Bump::value(double x) const {
  const double y = (x - center) / half_width;
  if (!(std::abs(y) < 1.0)) return {0.0, 0.0, 0.0};
  const double q = 1.0 - y * y;
  double b = q * q * q * q;
  if (odd) b *= y;
  return {amplitude[0] * b, amplitude[1] * b, amplitude[2] * b};
}

Vec3 Bump::mass() const {
  if (odd) return {0.0, 0.0, 0.0};
  const double unit = half_width * 256.0 / 315.0;
  return {amplitude[0] * unit, amplitude[1] * unit, amplitude[2] * unit};
}

CompositeAnsatz::CompositeAnsatz(const TwoShockSolution& sol, const GasParams& g,
                                 const ProfileOptions& opts)
    : CompositeAnsatz(sol, integrate_profile(sol.shock1, g, opts),
                      integrate_profile(sol.shock3, g, opts), g) {}

CompositeAnsatz::CompositeAnsatz(const TwoShockSolution& sol, ShockProfile p1, ShockProfile p3,
                                 const GasParams& g)
    : sol_(sol), g_(g), p1_(std::move(p1)), p3_(std::move(p3)), dw_(sol.z_m, 0.0, g) {
  r1_ = diff3(sol.z_m, sol.z_minus, g);
  r2_ = {g.R() / pressure(sol.z_m, g), 0.0, 1.0};
  r3_ = diff3(sol.z_plus, sol.z_m, g);
}

CompositeAnsatz CompositeAnsatz::with_shifts(const Shifts& s) const {
  CompositeAnsatz c = *this;
  c.shifts_ = s;
  c.dw_ = DiffusionWave(sol_.z_m, s.beta2, g_);
  return c;
}

double CompositeAnsatz::basis_condition() const {
  std::vector<const Vec3*> cols;
  if (!p1_.constant()) cols.push_back(&r1_);
  cols.push_back(&r2_);
  if (!p3_.constant()) cols.push_back(&r3_);
  Eigen::MatrixXd B(3, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (int i = 0; i < 3; ++i) B(i, j) = (*cols[j])[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

Fields composite_bar_m(double x, double t, const CompositeAnsatz& a, bool use_shifts) {
  const GasParams& g = a.gas();
  const double b1 = use_shifts ? a.shifts().beta1 : 0.0;
  const double b3 = use_shifts ? a.shifts().beta3 : 0.0;
  const ShockProfile& p1 = a.profile1();
  const ShockProfile& p3 = a.profile3();
  const ProfileSample z1 = evaluate(p1, x - p1.s * t + b1);
  const ProfileSample z3 = evaluate(p3, x - p3.s * t + b3);
  const PrimState& zm = a.z_m();
  const double k = g.kinetic_factor();
  const double Em = zm.theta() + k * zm.u() * zm.u();
  const double E1 = z1.Theta + k * z1.U * z1.U, E3 = z3.Theta + k * z3.U * z3.U;
  Fields f;
  f.v = z1.V + z3.V - zm.v();
  f.u = z1.U + z3.U - zm.u();
  f.E = E1 + E3 - Em;
  f.theta = f.E - k * f.u * f.u;
  return f;
}

double composite_cross_term(double x, double t, const CompositeAnsatz& a) {
  const ShockProfile& p1 = a.profile1();
  const ShockProfile& p3 = a.profile3();
  const ProfileSample z1 = evaluate(p1, x - p1.s * t + a.shifts().beta1);
  const ProfileSample z3 = evaluate(p3, x - p3.s * t + a.shifts().beta3);
  const Fields f = composite_bar_m(x, t, a);
  return f.theta - (z1.Theta + z3.Theta - a.z_m().theta());
}

Fields evaluate_M(double x, double t, const CompositeAnsatz& a) {
  Fields f = composite_bar_m(x, t, a);
  if (!a.dw().trivial()) {
    const GasParams& g = a.gas();
    const PrimState& zm = a.z_m();
    const DwJet<0> d = dw_jet<0>(a.dw(), x, t);
    f.v = f.v + (d.v.value() - zm.v());
    f.u = f.u + (d.u.value() - zm.u());
    f.E = f.E + (d.E.value() - a.dw().E_m());
    f.theta = f.E - g.kinetic_factor() * f.u * f.u;
  }
  if (!(f.theta > kPositivityFloor) || !(f.v > kPositivityFloor)) {
    std::ostringstream os;
    os << "asymptotic state loses positivity at x=" << x << ", t=" << t;
    fail(ErrorKind::regime, os.str());
  }
  return f;
}

Fields InitialData::at(double x) const {
  Fields f = evaluate_M(x, 0.0, base);
  for (const Bump& b : bumps) {
    const Vec3 d = b.value(x);
    f.v += d[0];
    f.u += d[1];
    f.E += d[2];
  }
  f.theta = f.E - base.gas().kinetic_factor() * f.u * f.u;
  return f;
}

void InitialData::check_positivity() const {
  for (const Bump& b : bumps) {
    for (int i = 0; i <= 400; ++i) {
      const double x = b.lo() + (b.hi() - b.lo()) * i / 400.0;
      const Fields f = at(x);
      if (!(f.v > kPositivityFloor) || !(f.theta > kPositivityFloor)) {
        std::ostringstream os;
        os << "perturbed data not positive at x=" << x << " (v=" << f.v << ", theta=" << f.theta
           << ")";
        fail(ErrorKind::bad_perturbation, os.str());
      }
    }
  }
}

InitialData make_initial_data(const CompositeAnsatz& a, const Shifts& planted,
                              std::vector<Bump> bumps) {
  InitialData d{a.with_shifts(planted), std::move(bumps)};
  d.check_positivity();
  return d;
}

Vec3 initial_mass_vector(const InitialData& data, const CompositeAnsatz& a) {
  return difference_mass(data.base, a.with_shifts(Shifts{}), data.bumps);
}

Vec3 zero_mass_defect(const InitialData& data, const CompositeAnsatz& solved) {
  return difference_mass(data.base, solved, data.bumps);
}

ShiftSolve solve_shifts(const Vec3& mass, const CompositeAnsatz& a, double max_condition) {
  ShiftSolve out;
  out.family1_active = !a.profile1().constant();
  out.family3_active = !a.profile3().constant();
  std::vector<const Vec3*> cols;
  std::vector<double*> targets;
  if (out.family1_active) {
    cols.push_back(&a.r1());
    targets.push_back(&out.shifts.beta1);
  }
  cols.push_back(&a.r2());
  targets.push_back(&out.shifts.beta2);
  if (out.family3_active) {
    cols.push_back(&a.r3());
    targets.push_back(&out.shifts.beta3);
  }
  Eigen::MatrixXd B(3, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (int i = 0; i < 3; ++i) B(i, j) = (*cols[j])[i];
  }
  const Eigen::Vector3d m(mass[0], mass[1], mass[2]);
  out.condition = a.basis_condition();
  if (!(out.condition < max_condition)) {
    std::ostringstream os;
    os << "wave basis nearly dependent, condition number " << out.condition;
    fail(ErrorKind::conditioning, os.str());
  }
  Eigen::VectorXd beta;
  if (cols.size() == 3) {
    beta = B.fullPivLu().solve(m);
    // One step of iterative refinement.
    beta += B.fullPivLu().solve(m - B * beta);
  } else {
    beta = B.colPivHouseholderQr().solve(m);
  }
  for (std::size_t j = 0; j < cols.size(); ++j) *targets[j] = beta(j);
  out.residual = (B * beta - m).norm();
  return out;
}

AnsatzResidual ansatz_residual(double x, double t, const CompositeAnsatz& a) {
  constexpr int K = 5;
  const GasParams& g = a.gas();
  const double R = g.R(), kappa = g.kappa(), gr = R / (g.gamma() - 1.0);
  const PrimState& zm = a.z_m();
  const double pm = pressure(zm, g), um = zm.u();
  const ShockProfile& p1 = a.profile1();
  const ShockProfile& p3 = a.profile3();
  const MJet<K> m = m_jet<K>(x, t, a);
  const ProfileJet<K + 1> j1 = profile_jet<K + 1>(p1, x - p1.s * t + a.shifts().beta1);
  const ProfileJet<K + 1> j3 = profile_jet<K + 1>(p3, x - p3.s * t + a.shifts().beta3);
  const DwJet<K> d = dw_jet<K>(a.dw(), x, t);
  const DwRemainderJet<K> rd = remainder_jets<K>(a.dw(), x, t);

  const Jet<K> V1 = j1.V.template truncate<K>(), V3 = j3.V.template truncate<K>();
  const Jet<K> U1 = j1.U.template truncate<K>(), U3 = j3.U.template truncate<K>();
  const Jet<K> P1 = R * j1.Theta.template truncate<K>() / V1;
  const Jet<K> P3 = R * j3.Theta.template truncate<K>() / V3;
  const Jet<K> pD = R * d.theta / d.v;
  const Jet<K> R1 = m.P - (P1 + P3 - pm + (pD - pm)) + rd.R1;

  using J4 = Jet<K - 1>;
  const J4 heat = kappa * m.Theta.dx() / m.V.template truncate<K - 1>();
  const J4 heat1 = kappa * j1.Theta.dx().template truncate<K - 1>() / V1.template truncate<K - 1>();
  const J4 heat3 = kappa * j3.Theta.dx().template truncate<K - 1>() / V3.template truncate<K - 1>();
  const J4 heatD = kappa * d.theta.dx() / d.v.template truncate<K - 1>();
  const Jet<K> PU = m.P * m.U;
  const Jet<K> pu_parts = P1 * U1 + P3 * U3 - pm * um + (pD * d.u - pm * um);
  const J4 R2 = -heat + heat1 + heat3 + heatD + (PU - pu_parts).template truncate<K - 1>() +
                rd.R2.template truncate<K - 1>();

  AnsatzResidual r;
  for (int k = 0; k <= 3; ++k) {
    r.R1[k] = R1.derivative(k);
    r.R2[k] = R2.derivative(k);
  }
  r.defect[0] = m.V_t.value() - m.U.dx().value();
  r.defect[1] = m.U_t.value() + m.P.dx().value() - R1.dx().value();
  r.defect[2] =
      gr * m.E_t.value() + PU.dx().value() - heat.dx().value() - R2.dx().value();
  return r;
}

double residual_sup(const CompositeAnsatz& a, double t, const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s = std::max(s, std::abs(ansatz_residual(x, t, a).R1[0]));
  return s;
}

double residual_envelope_constant(const CompositeAnsatz& a, const std::vector<double>& times,
                                  const std::vector<double>& sups, double c) {
  const double delta = a.solution().delta;
  const double b2 = std::abs(a.shifts().beta2);
  double C = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const double env = (delta * delta + b2 * std::pow(delta, 1.5)) * std::exp(-c * delta * t) +
                       b2 * std::pow(1.0 + t, -1.5) + std::exp(-c * t);
    C = std::max(C, sups[i] / env);
  }
  return C;
}

AntiDerivativeData antiderivative_initial_data(const InitialData& data,
                                               const CompositeAnsatz& solved,
                                               const std::vector<double>& x, double tol) {
  const GasParams& g = solved.gas();
  const double gr = g.R() / (g.gamma() - 1.0);
  check_same_far_fields(data.base, solved);
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorKind::config, "anti-derivative grid needs at least two nodes");
  const double inf = std::numeric_limits<double>::infinity();

  const CompositeAnsatz& A = data.base;
  auto tail_left = [&](double upper) {
    Vec3 m = profile_shift_partial(A.profile1(), A.shifts().beta1, solved.shifts().beta1, upper, gr);
    m += profile_shift_partial(A.profile3(), A.shifts().beta3, solved.shifts().beta3, upper, gr);
    m += dw_partial(A.dw(), solved.dw(), -inf, upper, gr);
    m += bumps_partial(data.bumps, -inf, upper, gr);
    return m;
  };
  auto f = [&](double y) {
    const Fields d0 = data.at(y);
    const Fields M = evaluate_M(y, 0.0, solved);
    return Vec3{d0.v - M.v, d0.u - M.u, gr * (d0.E - M.E)};
  };

  AntiDerivativeData out;
  out.x = x;
  out.Phi.resize(n);
  out.Psi.resize(n);
  out.Wbar.resize(n);
  out.W.resize(n);
  Vec3 F = tail_left(x[0]);
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) {
      const int sub = 2;
      for (int k = 0; k < sub; ++k) {
        const double a = x[j - 1] + (x[j] - x[j - 1]) * k / sub;
        const double b = x[j - 1] + (x[j] - x[j - 1]) * (k + 1) / sub;
        F += gl_integrate(f, a, b);
      }
    }
    out.Phi[j] = F[0];
    out.Psi[j] = F[1];
    out.Wbar[j] = F[2];
    const Fields M = evaluate_M(x[j], 0.0, solved);
    out.W[j] = (out.Wbar[j] - M.u * out.Psi[j]) / gr;
  }
  // Right limit: grid value plus the remaining tail.
  const Vec3 total = difference_mass(A, solved, data.bumps, gr);
  const Vec3 rest = total - tail_left(x[n - 1]);
  out.right_limit = {F[0] + rest[0], F[1] + rest[1], F[2] + rest[2]};

  double l1 = 0.0, h1 = 0.0, l2 = 0.0;
  std::vector<Vec3> dif(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Fields d0 = data.at(x[j]);
    const Fields M = evaluate_M(x[j], 0.0, solved);
    dif[j] = {d0.v - M.v, d0.u - M.u, d0.theta - M.theta};
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double wl = j > 0 ? 0.5 * (x[j] - x[j - 1]) : 0.0;
    const double wr = j + 1 < n ? 0.5 * (x[j + 1] - x[j]) : 0.0;
    const double w = wl + wr;
    const std::size_t jl = j > 0 ? j - 1 : j, jr = j + 1 < n ? j + 1 : j;
    double sq = 0.0, sqx = 0.0;
    for (int c = 0; c < 3; ++c) {
      l1 += w * std::abs(dif[j][c]);
      sq += dif[j][c] * dif[j][c];
      const double dx = (dif[jr][c] - dif[jl][c]) / (x[jr] - x[jl]);
      sqx += dx * dx;
    }
    h1 += w * (sq + sqx);
    l2 += w * (out.Phi[j] * out.Phi[j] + out.Psi[j] * out.Psi[j] + out.Wbar[j] * out.Wbar[j]);
  }
  out.norm_H1L1 = l1 + std::sqrt(h1);
  out.norm_L2_anti = std::sqrt(l2);
  out.I0 = out.norm_H1L1 + out.norm_L2_anti;

  const double worst = std::max(
      {std::abs(out.right_limit[0]), std::abs(out.right_limit[1]), std::abs(out.right_limit[2])});
  if (worst > tol) {
    std::ostringstream os;
    os << "anti-derivative does not vanish at +infinity (" << worst << ")";
    fail(ErrorKind::mass_mismatch, os.str());
  }
  return out;
}

void write_M_csv(const CompositeAnsatz& a, double t, const std::vector<double>& xs,
                 std::ostream& os, const Metadata& extra) {
  Metadata meta = extra;
  meta.emplace_back("t", fmt_double(t));
  meta.emplace_back("beta1", fmt_double(a.shifts().beta1));
  meta.emplace_back("beta2", fmt_double(a.shifts().beta2));
  meta.emplace_back("beta3", fmt_double(a.shifts().beta3));
  write_csv_header(os, meta, {"x", "V", "U", "Theta", "R1", "R2"});
  for (double x : xs) {
    const Fields f = evaluate_M(x, t, a);
    const AnsatzResidual r = ansatz_residual(x, t, a);
    write_csv_row(os, {x, f.v, f.u, f.theta, r.R1[0], r.R2[0]});
  }
}

void write_antiderivative_csv(const AntiDerivativeData& d, std::ostream& os,
                              const Metadata& extra) {
  Metadata meta = extra;
  meta.emplace_back("I0", fmt_double(d.I0));
  write_csv_header(os, meta, {"x", "Phi", "Psi", "Wbar", "W"});
  for (std::size_t j = 0; j < d.x.size(); ++j) {
    write_csv_row(os, {d.x[j], d.Phi[j], d.Psi[j], d.Wbar[j], d.W[j]});
  }
}

}  // namespace cwave

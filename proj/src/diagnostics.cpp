#include "cwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cwave/error.hpp"

namespace cwave {

std::vector<double> derivative4(const std::vector<double>& f, double dx) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  for (int i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * dx);
    } else if (i >= 1 && i + 1 < n) {
      d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    } else if (i == 0) {
      d[i] = n >= 3 ? (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx) : (f[1] - f[0]) / dx;
    } else {
      d[i] = n >= 3 ? (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * dx) : (f[i] - f[i - 1]) / dx;
    }
  }
  return d;
}

std::vector<double> cumulative4(const std::vector<double>& f, double dx, double* right_limit) {
  const int n = static_cast<int>(f.size());
  std::vector<double> F(n, 0.0);
  if (n == 0) return F;
  F[0] = 0.5 * dx * f[0];
  for (int i = 0; i + 1 < n; ++i) {
    if (i >= 1 && i + 2 < n) {
      F[i + 1] = F[i] + dx / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
    } else {
      F[i + 1] = F[i] + 0.5 * dx * (f[i] + f[i + 1]);
    }
  }
  if (right_limit) *right_limit = F[n - 1] + 0.5 * dx * f[n - 1];
  return F;
}

namespace {

// Sum over the interior of f^2 dx.
double interior_sq(const std::vector<double>& f, int margin, double dx) {
  double s = 0.0;
  const int n = static_cast<int>(f.size());
  for (int i = margin; i < n - margin; ++i) s += f[i] * f[i];
  return s * dx;
}

// Sum of ||D^k f||^2 for k = 0..order.
double sobolev_sq(const std::vector<double>& f, int order, int margin, double dx) {
  double s = interior_sq(f, margin, dx);
  std::vector<double> d = f;
  for (int k = 1; k <= order; ++k) {
    d = derivative4(d, dx);
    s += interior_sq(d, margin, dx);
  }
  return s;
}

}  // namespace

void complete_frame(PerturbationFrame& f, const GasParams& g) {
  const int n = static_cast<int>(f.x.size());
  const double gr1 = (g.gamma() - 1.0) / g.R();
  f.W.resize(n);
  for (int i = 0; i < n; ++i) f.W[i] = gr1 * (f.Wbar[i] - f.U[i] * f.Psi[i]);
  f.Wx = derivative4(f.W, f.dx);
  f.xi.resize(n);
  for (int i = 0; i < n; ++i) {
    f.xi[i] = f.Wx[i] + gr1 * (f.Ux[i] * f.Psi[i] - 0.5 * f.psi[i] * f.psi[i]);
  }
  const int m = f.margin;
  const double dx = f.dx;
  // Phi and Psi have exact first derivatives phi and psi.
  f.norm3_sq = interior_sq(f.Phi, m, dx) + sobolev_sq(f.phi, 2, m, dx) +
               interior_sq(f.Psi, m, dx) + sobolev_sq(f.psi, 2, m, dx) + sobolev_sq(f.W, 3, m, dx);
  f.dissipation_integrand =
      sobolev_sq(f.phi, 2, m, dx) + sobolev_sq(f.psi, 2, m, dx) + sobolev_sq(f.Wx, 2, m, dx);
  f.xi_integrand = sobolev_sq(f.xi, 3, m, dx);
  double w = 0.0;
  for (int i = m; i < n - m; ++i) w += f.weight[i] * (f.Psi[i] * f.Psi[i] + f.W[i] * f.W[i]);
  f.weighted_integrand = w * dx;
  const std::vector<double> dPhi = derivative4(f.Phi, dx);
  f.consistency = 0.0;
  for (int i = m; i < n - m; ++i) f.consistency = std::max(f.consistency, std::abs(dPhi[i] - f.phi[i]));
}

PerturbationFrame build_frame(const Field& field, const CompositeAnsatz& a, const FrameOptions& opts) {
  const GasParams& g = a.gas();
  const int n = field.size();
  const double t = field.t;
  const double gr = g.R() / (g.gamma() - 1.0);
  PerturbationFrame f;
  f.t = t;
  f.dx = field.grid.dx();
  f.margin = opts.margin;
  f.x = field.grid.centers();
  f.phi.resize(n);
  f.psi.resize(n);
  f.zeta.resize(n);
  f.U.resize(n);
  f.Ux.resize(n);
  f.weight.resize(n);
  std::vector<double> eps(n);
  const ShockProfile& p1 = a.profile1();
  const ShockProfile& p3 = a.profile3();
  const Shifts& sh = a.shifts();
  double dist = 0.0;
#pragma omp parallel for if (n > 4096) schedule(static) reduction(max : dist)
  for (int i = 0; i < n; ++i) {
    const double x = f.x[i];
    const MJet<1> m = m_jet<1>(x, t, a);
    const double th = field.theta(i, g);
    f.phi[i] = field.v[i] - m.V.value();
    f.psi[i] = field.u[i] - m.U.value();
    f.zeta[i] = th - m.Theta.value();
    eps[i] = gr * (field.E[i] - m.E.value());
    f.U[i] = m.U.value();
    f.Ux[i] = m.U.derivative(1);
    const double w1 = p1.constant() ? 0.0 : profile_jet<1>(p1, x - p1.s * t + sh.beta1).U.derivative(1);
    const double w3 = p3.constant() ? 0.0 : profile_jet<1>(p3, x - p3.s * t + sh.beta3).U.derivative(1);
    f.weight[i] = std::abs(w1) + std::abs(w3);
    const Fields c = composite_bar_m(x, t, a);
    dist = std::max({dist, std::abs(field.v[i] - c.v), std::abs(field.u[i] - c.u),
                     std::abs(th - c.theta)});
  }
  f.sup_distance = dist;
  f.Phi = cumulative4(f.phi, f.dx, &f.right_limit[0]);
  f.Psi = cumulative4(f.psi, f.dx, &f.right_limit[1]);
  f.Wbar = cumulative4(eps, f.dx, &f.right_limit[2]);
  complete_frame(f, g);
  const double drift = std::max(
      {std::abs(f.right_limit[0]), std::abs(f.right_limit[1]), std::abs(f.right_limit[2])});
  f.tainted = drift > opts.mass_tol;
  return f;
}

double sup_distance_to_shifted_composite(const Field& field, const CompositeAnsatz& a) {
  const GasParams& g = a.gas();
  double d = 0.0;
  for (int i = 0; i < field.size(); ++i) {
    const Fields c = composite_bar_m(field.grid.x(i), field.t, a);
    d = std::max({d, std::abs(field.v[i] - c.v), std::abs(field.u[i] - c.u),
                  std::abs(field.theta(i, g) - c.theta)});
  }
  return d;
}

void EnergyLedger::update(const PerturbationFrame& f) {
  LedgerRow r;
  r.t = f.t;
  r.norm3 = std::sqrt(f.norm3_sq);
  r.sup_distance = f.sup_distance;
  r.mass_drift = std::max(
      {std::abs(f.right_limit[0]), std::abs(f.right_limit[1]), std::abs(f.right_limit[2])});
  r.tainted = f.tainted;
  if (rows_.empty()) {
    r.N = r.norm3;
  } else {
    const LedgerRow& p = rows_.back();
    if (!(f.t > p.t)) {
      std::ostringstream os;
      os << "frame at t=" << f.t << " does not follow t=" << p.t;
      fail(ErrorKind::ordering, os.str());
    }
    const double h = 0.5 * (f.t - p.t);
    r.N = std::max(p.N, r.norm3);
    r.weighted = p.weighted + h * (last_weighted_ + f.weighted_integrand);
    r.dissipation = p.dissipation + h * (last_dissipation_ + f.dissipation_integrand);
    r.xi = p.xi + h * (last_xi_ + f.xi_integrand);
  }
  last_weighted_ = f.weighted_integrand;
  last_dissipation_ = f.dissipation_integrand;
  last_xi_ = f.xi_integrand;
  rows_.push_back(r);
}

void update_ledger(EnergyLedger& ledger, const PerturbationFrame& frame) { ledger.update(frame); }

namespace {

double value_at(const std::vector<LedgerRow>& rows, double t, double LedgerRow::*field) {
  // Linear interpolation in time.
  if (t <= rows.front().t) return rows.front().*field;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].t >= t) {
      const double s = (t - rows[i - 1].t) / (rows[i].t - rows[i - 1].t);
      return (1.0 - s) * (rows[i - 1].*field) + s * (rows[i].*field);
    }
  }
  return rows.back().*field;
}

double saturation(const std::vector<LedgerRow>& rows, double LedgerRow::*field) {
  const double total = rows.back().*field;
  if (!(total > 0.0)) return 0.0;
  const double half = value_at(rows, 0.5 * rows.back().t, field);
  return (total - half) / total;
}

}  // namespace

Verdict verdict(const EnergyLedger& ledger, double I0, double delta, double beta2,
                const VerdictOptions& opts) {
  Verdict v;
  v.I0 = I0;
  if (ledger.empty()) {
    v.vacuous = true;
    return v;
  }
  const auto& rows = ledger.rows();
  for (const LedgerRow& r : rows) {
    if (r.norm3 > v.sup_N) {
      v.sup_N = r.norm3;
      v.t_sup_N = r.t;
    }
    v.any_tainted = v.any_tainted || r.tainted;
  }
  v.saturation_weighted = saturation(rows, &LedgerRow::weighted);
  v.saturation_dissipation = saturation(rows, &LedgerRow::dissipation);
  v.saturation_xi = saturation(rows, &LedgerRow::xi);
  const LedgerRow& last = rows.back();
  v.lhs = v.sup_N * v.sup_N + last.weighted + last.dissipation + last.xi;
  v.rhs_base = rows.front().norm3 * rows.front().norm3 + std::sqrt(std::max(delta, 0.0)) +
               std::abs(beta2);
  v.vacuous = !(v.lhs > 1e-14) || !(v.rhs_base > 1e-14);
  v.C0 = v.vacuous ? 0.0 : v.lhs / v.rhs_base;
  v.distance_initial = rows.front().sup_distance;
  v.distance_final = last.sup_distance;
  v.distance_ratio = v.distance_initial > 0.0 ? v.distance_final / v.distance_initial : 0.0;
  bool mono = true;
  double running_min = std::numeric_limits<double>::infinity();
  for (const LedgerRow& r : rows) {
    if (r.t < opts.monotone_after) continue;
    if (r.sup_distance > (1.0 + opts.wiggle) * running_min) mono = false;
    running_min = std::min(running_min, r.sup_distance);
  }
  v.distance_non_increasing = mono;
  return v;
}

nlohmann::json to_json(const Verdict& v) {
  return nlohmann::json{
      {"sup_N", v.sup_N},
      {"t_sup_N", v.t_sup_N},
      {"saturation",
       {{"weighted", v.saturation_weighted},
        {"dissipation", v.saturation_dissipation},
        {"xi", v.saturation_xi}}},
      {"lhs", v.lhs},
      {"rhs_base", v.rhs_base},
      {"C0", v.C0},
      {"vacuous", v.vacuous},
      {"I0", v.I0},
      {"distance", {{"initial", v.distance_initial}, {"final", v.distance_final},
                    {"ratio", v.distance_ratio}, {"non_increasing", v.distance_non_increasing}}},
      {"any_tainted", v.any_tainted},
  };
}

void write_ledger_csv(const EnergyLedger& ledger, std::ostream& os, const Metadata& extra) {
  write_csv_header(os, extra,
                   {"t", "norm3", "N", "weighted", "dissipation", "xi", "sup_distance",
                    "mass_drift", "tainted"});
  for (const LedgerRow& r : ledger.rows()) {
    write_csv_row(os, {r.t, r.norm3, r.N, r.weighted, r.dissipation, r.xi, r.sup_distance,
                       r.mass_drift, r.tainted ? 1.0 : 0.0});
  }
}

}  // namespace cwave

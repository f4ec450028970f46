#include "cwave/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cwave {

Grid1D::Grid1D(double lo, double hi, int n) : x_min(lo), x_max(hi), n_cells(n) {
  if (!(hi > lo) || n <= 0 || !std::isfinite(lo) || !std::isfinite(hi)) {
    fail(ErrorKind::config, "grid needs x_max > x_min and a positive cell count");
  }
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> c(n_cells);
  for (int i = 0; i < n_cells; ++i) c[i] = x(i);
  return c;
}

Grid1D grid_for_run(const TwoShockSolution& sol, double T, double x_min, double x_max, double dx,
                    double margin) {
  if (!(dx > 0.0)) fail(ErrorKind::config, "dx must be positive");
  const double lo = std::min(x_min, std::min(0.0, sol.s1 * T) - margin);
  const double hi = std::max(x_max, std::max(0.0, sol.s3 * T) + margin);
  const int n = static_cast<int>(std::ceil((hi - lo) / dx - 1e-9));
  return Grid1D(lo, lo + n * dx, n);
}

Vec3 Field::totals() const {
  Vec3 s{0.0, 0.0, 0.0};
  for (int i = 0; i < size(); ++i) {
    s[0] += v[i];
    s[1] += u[i];
    s[2] += E[i];
  }
  const double dx = grid.dx();
  return {s[0] * dx, s[1] * dx, s[2] * dx};
}

BoundaryFn ansatz_boundary(const CompositeAnsatz& a) {
  return [a](double x, double t) { return evaluate_M(x, t, a); };
}

BoundaryFn constant_boundary(const PrimState& z, const GasParams& g) {
  const Fields f{z.v(), z.u(), z.theta(), z.theta() + g.kinetic_factor() * z.u() * z.u()};
  return [f](double, double) { return f; };
}

void SolverConfig::validate() const {
  if (!(cfl_hyperbolic > 0.0) || !(cfl_parabolic > 0.0)) {
    fail(ErrorKind::config, "CFL numbers must be positive");
  }
  if (!(T >= 0.0) || !std::isfinite(T)) fail(ErrorKind::config, "end time must be non-negative");
  if (!(snapshot_every >= 0.0)) fail(ErrorKind::config, "snapshot cadence must be non-negative");
  if (max_halvings < 0) fail(ErrorKind::config, "max_halvings must be non-negative");
}

Field initialize(const std::function<Fields(double)>& fn, const Grid1D& grid, const GasParams& g) {
  Field f;
  f.grid = grid;
  const int n = grid.n_cells;
  f.v.resize(n);
  f.u.resize(n);
  f.E.resize(n);
  for (int i = 0; i < n; ++i) {
    const Fields z = fn(grid.x(i));
    f.v[i] = z.v;
    f.u[i] = z.u;
    f.E[i] = z.E;
    const double th = f.theta(i, g);
    if (!(z.v > kPositivityFloor) || !(th > kPositivityFloor)) {
      std::ostringstream os;
      os << "initial data not positive at x=" << grid.x(i);
      fail(ErrorKind::bad_perturbation, os.str());
    }
  }
  return f;
}

Field initialize(const InitialData& data, const Grid1D& grid) {
  return initialize([&](double x) { return data.at(x); }, grid, data.base.gas());
}

double stable_dt(const Field& f, const SolverConfig& cfg, const GasParams& g) {
  double lam = 0.0, vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i) {
    const double th = f.theta(i, g);
    lam = std::max(lam, std::sqrt(g.gamma() * g.R() * th) / f.v[i]);
    vmin = std::min(vmin, f.v[i]);
  }
  const double dx = f.grid.dx();
  double dt = cfg.cfl_hyperbolic * dx / lam;
  const double diff = (g.gamma() - 1.0) * g.kappa() / (g.R() * vmin);
  if (!cfg.implicit_diffusion && diff > 0.0) dt = std::min(dt, cfg.cfl_parabolic * dx * dx / diff);
  return dt;
}

namespace {

struct Workspace {
  std::vector<double> V, U, T;      // extended primitive values with two ghosts per side
  std::vector<double> Fv, Fu, FE;   // face fluxes
};

void fill_extended(const Grid1D& gr, const double* v, const double* u, const double* E, double t,
                   const BoundaryFn& bc, const GasParams& g, Workspace& w) {
  const int n = gr.n_cells;
  const double k = g.kinetic_factor();
  w.V.resize(n + 4);
  w.U.resize(n + 4);
  w.T.resize(n + 4);
  for (int i = 0; i < n; ++i) {
    w.V[i + 2] = v[i];
    w.U[i + 2] = u[i];
    w.T[i + 2] = E[i] - k * u[i] * u[i];
  }
  for (int j = 0; j < 2; ++j) {
    const Fields l = bc(gr.x(j - 2), t);
    w.V[j] = l.v;
    w.U[j] = l.u;
    w.T[j] = l.E - k * l.u * l.u;
    const Fields r = bc(gr.x(n + j), t);
    w.V[n + 2 + j] = r.v;
    w.U[n + 2 + j] = r.u;
    w.T[n + 2 + j] = r.E - k * r.u * r.u;
  }
}

// Semi-discrete right-hand side -(F_{i+1/2} - F_{i-1/2}) / dx.
void eval_rhs(const Grid1D& gr, const double* v, const double* u, const double* E, double t,
              const BoundaryFn& bc, const GasParams& g, bool second_order, bool diffusion,
              Workspace& w, double* dv, double* du, double* dE) {
  fill_extended(gr, v, u, E, t, bc, g, w);
  const int n = gr.n_cells;
  const double dx = gr.dx(), R = g.R(), gam = g.gamma(), k = g.kinetic_factor();
  const double gr1 = (gam - 1.0) / R, kap = g.kappa();
  w.Fv.resize(n + 1);
  w.Fu.resize(n + 1);
  w.FE.resize(n + 1);
  const double* V = w.V.data();
  const double* U = w.U.data();
  const double* T = w.T.data();

#pragma omp parallel for if (n > 4096) schedule(static)
  for (int f = 0; f <= n; ++f) {
    const int a = f + 1, b = f + 2;
    double vl = V[a], ul = U[a], tl = T[a];
    double vr = V[b], ur = U[b], tr = T[b];
    if (second_order) {
      const double vl2 = vl + 0.25 * (V[b] - V[a - 1]), ul2 = ul + 0.25 * (U[b] - U[a - 1]);
      const double tl2 = tl + 0.25 * (T[b] - T[a - 1]);
      const double vr2 = vr - 0.25 * (V[b + 1] - V[a]), ur2 = ur - 0.25 * (U[b + 1] - U[a]);
      const double tr2 = tr - 0.25 * (T[b + 1] - T[a]);
      // Keep the face first order where the reconstruction leaves the admissible set.
      if (vl2 > 0.0 && tl2 > 0.0 && vr2 > 0.0 && tr2 > 0.0) {
        vl = vl2, ul = ul2, tl = tl2, vr = vr2, ur = ur2, tr = tr2;
      }
    }
    const double pl = R * tl / vl, pr = R * tr / vr;
    const double cl = std::sqrt(gam * pl / vl), cr = std::sqrt(gam * pr / vr);
    const double s = std::max(cl, cr);
    const double El = tl + k * ul * ul, Er = tr + k * ur * ur;
    w.Fv[f] = 0.5 * (-ul - ur) - 0.5 * s * (vr - vl);
    w.Fu[f] = 0.5 * (pl + pr) - 0.5 * s * (ur - ul);
    w.FE[f] = 0.5 * gr1 * (pl * ul + pr * ur) - 0.5 * s * (Er - El);
    if (diffusion) {
      w.FE[f] -= gr1 * kap * (T[b] - T[a]) / dx * 2.0 / (V[a] + V[b]);
    }
  }
#pragma omp parallel for if (n > 4096) schedule(static)
  for (int i = 0; i < n; ++i) {
    dv[i] = -(w.Fv[i + 1] - w.Fv[i]) / dx;
    du[i] = -(w.Fu[i + 1] - w.Fu[i]) / dx;
    dE[i] = -(w.FE[i + 1] - w.FE[i]) / dx;
  }
}

bool positive(const std::vector<double>& v, const std::vector<double>& u,
              const std::vector<double>& E, const GasParams& g) {
  const double k = g.kinetic_factor();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > kPositivityFloor) || !(E[i] - k * u[i] * u[i] > kPositivityFloor)) return false;
  }
  return true;
}

// Crank-Nicolson heat conduction over tau at frozen v and u. Returns the
// time-integrated energy flux through the right minus left faces.
double cn_diffusion(Field& f, double t0, double tau, const BoundaryFn& bc, const GasParams& g) {
  const int n = f.size();
  const double dx = f.grid.dx(), k = g.kinetic_factor();
  const double gr1 = (g.gamma() - 1.0) / g.R(), kap = g.kappa();
  if (gr1 == 0.0 || kap == 0.0) return 0.0;
  const Fields l0 = bc(f.grid.x(-1), t0), r0 = bc(f.grid.x(n), t0);
  const Fields l1 = bc(f.grid.x(-1), t0 + tau), r1 = bc(f.grid.x(n), t0 + tau);
  const double tl0 = l0.E - k * l0.u * l0.u, tr0 = r0.E - k * r0.u * r0.u;
  const double tl1 = l1.E - k * l1.u * l1.u, tr1 = r1.E - k * r1.u * r1.u;
  std::vector<double> th(n), c(n + 1);
  for (int i = 0; i < n; ++i) th[i] = f.theta(i, g);
  for (int j = 0; j <= n; ++j) {
    const double va = j == 0 ? l0.v : f.v[j - 1];
    const double vb = j == n ? r0.v : f.v[j];
    c[j] = kap * 2.0 / (va + vb) / dx;
  }
  auto G = [&](int j, const std::vector<double>& q, double ql, double qr) {
    const double a = j == 0 ? ql : q[j - 1];
    const double b = j == n ? qr : q[j];
    return c[j] * (b - a);
  };
  const double alpha = 0.5 * tau * gr1 / dx;
  std::vector<double> lo(n), di(n), up(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    rhs[i] = th[i] + alpha * (G(i + 1, th, tl0, tr0) - G(i, th, tl0, tr0));
    di[i] = 1.0 + alpha * (c[i] + c[i + 1]);
    lo[i] = -alpha * c[i];
    up[i] = -alpha * c[i + 1];
  }
  rhs[0] += alpha * c[0] * tl1;
  rhs[n - 1] += alpha * c[n] * tr1;
  // Thomas elimination.
  for (int i = 1; i < n; ++i) {
    const double m = lo[i] / di[i - 1];
    di[i] -= m * up[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> nt(n);
  nt[n - 1] = rhs[n - 1] / di[n - 1];
  for (int i = n - 2; i >= 0; --i) nt[i] = (rhs[i] - up[i] * nt[i + 1]) / di[i];
  const double g_left = 0.5 * (G(0, th, tl0, tr0) + G(0, nt, tl1, tr1));
  const double g_right = 0.5 * (G(n, th, tl0, tr0) + G(n, nt, tl1, tr1));
  for (int i = 0; i < n; ++i) f.E[i] = nt[i] + k * f.u[i] * f.u[i];
  return -tau * gr1 * (g_right - g_left);
}

}  // namespace

StepInfo step(Field& f, const BoundaryFn& bc, const SolverConfig& cfg, const GasParams& g,
              double dt_max) {
  const int n = f.size();
  const double dx = f.grid.dx();
  double dt = std::min(stable_dt(f, cfg, g), dt_max);
  if (!(dt > 0.0)) fail(ErrorKind::config, "non-positive time step");
  const bool explicit_diff = !cfg.implicit_diffusion;
  Workspace w;
  std::vector<double> kv(n), ku(n), kE(n), sv(n), su(n), sE(n);

  for (int attempt = 0; attempt <= cfg.max_halvings; ++attempt, dt *= 0.5) {
    Field trial = f;
    Vec3 bflux{0.0, 0.0, 0.0};
    double t0 = f.t;
    if (!explicit_diff) {
      bflux[2] += cn_diffusion(trial, t0, 0.5 * dt, bc, g);
    }
    eval_rhs(trial.grid, trial.v.data(), trial.u.data(), trial.E.data(), t0, bc, g,
             cfg.second_order, explicit_diff, w, kv.data(), ku.data(), kE.data());
    for (int i = 0; i < n; ++i) {
      sv[i] = trial.v[i] + 0.5 * dt * kv[i];
      su[i] = trial.u[i] + 0.5 * dt * ku[i];
      sE[i] = trial.E[i] + 0.5 * dt * kE[i];
    }
    if (!positive(sv, su, sE, g)) continue;
    eval_rhs(trial.grid, sv.data(), su.data(), sE.data(), t0 + 0.5 * dt, bc, g, cfg.second_order,
             explicit_diff, w, kv.data(), ku.data(), kE.data());
    for (int i = 0; i < n; ++i) {
      trial.v[i] += dt * kv[i];
      trial.u[i] += dt * ku[i];
      trial.E[i] += dt * kE[i];
    }
    bflux[0] += dt * (w.Fv[n] - w.Fv[0]);
    bflux[1] += dt * (w.Fu[n] - w.Fu[0]);
    bflux[2] += dt * (w.FE[n] - w.FE[0]);
    if (!explicit_diff) {
      bflux[2] += cn_diffusion(trial, t0 + 0.5 * dt, 0.5 * dt, bc, g);
    }
    if (!positive(trial.v, trial.u, trial.E, g)) continue;

    StepInfo info;
    info.dt = dt;
    info.halvings = attempt;
    info.boundary_flux = bflux;
    Vec3 change{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      change[0] += trial.v[i] - f.v[i];
      change[1] += trial.u[i] - f.u[i];
      change[2] += trial.E[i] - f.E[i];
    }
    for (int c = 0; c < 3; ++c) info.conservation_defect[c] = change[c] * dx + bflux[c];
    trial.t = t0 + dt;
    f = std::move(trial);
    return info;
  }
  std::ostringstream os;
  os << "positivity lost at t=" << f.t << " after " << cfg.max_halvings << " halvings";
  fail(ErrorKind::positivity_loss, os.str());
}

RunResult run(Field f, const BoundaryFn& bc, const SolverConfig& cfg, const GasParams& g,
              const SnapshotSink& sink) {
  cfg.validate();
  RunResult res;
  const double T = cfg.T;
  const double eps = 1e-12 * std::max(1.0, T);
  if (sink) sink(f);
  long k = 1;
  auto next_snap = [&]() {
    return cfg.snapshot_every > 0.0 ? std::min(T, k * cfg.snapshot_every) : T;
  };
  while (f.t < T - eps) {
    const double target = next_snap();
    try {
      const StepInfo info = step(f, bc, cfg, g, target - f.t);
      ++res.steps;
      res.dt_history.push_back(info.dt);
      for (double d : info.conservation_defect) {
        res.max_conservation_defect = std::max(res.max_conservation_defect, std::abs(d));
      }
    } catch (const Error& e) {
      res.aborted = true;
      res.abort_kind = e.kind();
      res.abort_message = e.what();
      break;
    }
    if (std::abs(f.t - target) <= eps) {
      f.t = target;
      if (sink) sink(f);
      ++k;
    }
  }
  res.final = std::move(f);
  return res;
}

std::optional<std::string> resolution_warning(const Grid1D& grid, const CompositeAnsatz& a) {
  double rate = 0.0;
  for (const ShockProfile* p : {&a.profile1(), &a.profile3()}) {
    if (p->constant()) continue;
    rate = std::max({rate, std::abs(p->lambda_left), std::abs(p->lambda_right)});
  }
  if (rate > 0.0 && grid.dx() > 0.1 / rate) {
    std::ostringstream os;
    os << "dx=" << grid.dx() << " exceeds 0.1 / shock tail rate (" << 0.1 / rate << ")";
    return os.str();
  }
  return std::nullopt;
}

void write_snapshot_csv(const Field& f, const CompositeAnsatz& a, std::ostream& os,
                        const Metadata& extra) {
  Metadata meta = extra;
  meta.emplace_back("t", fmt_double(f.t));
  write_csv_header(os, meta,
                   {"x", "v", "u", "theta", "E", "V", "U", "Theta", "dv", "du", "dtheta"});
  const GasParams& g = a.gas();
  for (int i = 0; i < f.size(); ++i) {
    const double x = f.grid.x(i);
    const Fields M = evaluate_M(x, f.t, a);
    const double th = f.theta(i, g);
    write_csv_row(os, {x, f.v[i], f.u[i], th, f.E[i], M.v, M.u, M.theta, f.v[i] - M.v,
                       f.u[i] - M.u, th - M.theta});
  }
}

}  // namespace cwave

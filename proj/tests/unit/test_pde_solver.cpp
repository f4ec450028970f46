#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cwave/pde_solver.hpp"

using namespace cwave;

namespace {

const GasParams g = GasParams::reference();

const CompositeAnsatz& ref() {
  static const CompositeAnsatz a(build_two_shock(PrimState(1.0, 0.0, 1.0), 0.9, 0.99, g), g);
  return a;
}

double sup_dev_v(const Field& f, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (int i = 0; i < f.size(); ++i) e = std::max(e, std::abs(f.v[i] - exact(f.grid.x(i))));
  return e;
}

}  // namespace

TEST_CASE("grid construction") {
  const Grid1D gr(-1.0, 1.0, 20);
  CHECK(gr.dx() == doctest::Approx(0.1));
  CHECK(gr.x(0) == doctest::Approx(-0.95));
  CHECK(gr.centers().size() == 20);
  CHECK_THROWS_AS(Grid1D(1.0, 1.0, 5), Error);
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 0), Error);
  const Grid1D run = grid_for_run(ref().solution(), 100.0, -120.0, 160.0, 0.05, 25.0);
  CHECK(run.x_min <= ref().solution().s1 * 100.0 - 25.0);
  CHECK(run.x_max >= 160.0);
  CHECK(run.dx() == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("configuration checks") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.cfl_hyperbolic = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SolverConfig{};
  c.T = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("initialization") {
  const Grid1D gr(-20.0, 20.0, 400);
  const InitialData plain = make_initial_data(ref(), Shifts{}, {});
  const Field f = initialize(plain, gr);
  for (int i = 0; i < f.size(); i += 37) {
    const Fields M = evaluate_M(gr.x(i), 0.0, ref());
    CHECK(f.v[i] == M.v);
    CHECK(f.u[i] == M.u);
    CHECK(f.E[i] == M.E);
  }
  // A bump strong enough to make theta negative is rejected.
  CHECK_THROWS_AS(make_initial_data(ref(), Shifts{}, {Bump::with_mass(0.0, 1.0, {0.0, 0.0, -5.0})}),
                  Error);
  try {
    initialize([](double) { return Fields{1.0, 0.0, -1.0, -1.0}; }, gr, g);
    FAIL("expected bad perturbation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::bad_perturbation);
  }
}

TEST_CASE("constant states are equilibria") {
  const PrimState z(0.8, -0.3, 1.2);
  const Grid1D gr(-5.0, 5.0, 100);
  const Fields c{z.v(), z.u(), z.theta(), z.theta() + g.kinetic_factor() * z.u() * z.u()};
  for (bool implicit : {false, true}) {
    Field f = initialize([&](double) { return c; }, gr, g);
    SolverConfig cfg;
    cfg.implicit_diffusion = implicit;
    const BoundaryFn bc = constant_boundary(z, g);
    for (int s = 0; s < (implicit ? 1000 : 10000); ++s) step(f, bc, cfg, g, 1.0);
    // Explicit fluxes cancel exactly; the tridiagonal solve leaves rounding.
    const double tol = implicit ? 1e-13 : 0.0;
    for (int i = 0; i < f.size(); ++i) {
      REQUIRE(std::abs(f.v[i] - c.v) <= tol);
      REQUIRE(std::abs(f.u[i] - c.u) <= tol);
      REQUIRE(std::abs(f.E[i] - c.E) <= tol);
    }
  }
}

TEST_CASE("interior update telescopes") {
  const CompositeAnsatz& a = ref();
  const InitialData d = make_initial_data(
      a, Shifts{}, {Bump::with_mass(-3.0, 2.0, {0.01, 0.005, 0.01})});
  const Grid1D gr(-30.0, 30.0, 1200);
  for (bool implicit : {false, true}) {
    Field f = initialize(d, gr);
    SolverConfig cfg;
    cfg.implicit_diffusion = implicit;
    const BoundaryFn bc = ansatz_boundary(a);
    for (int s = 0; s < 50; ++s) {
      const Vec3 before = f.totals();
      const StepInfo info = step(f, bc, cfg, g, 1.0);
      const Vec3 after = f.totals();
      for (int c = 0; c < 3; ++c) {
        REQUIRE(std::abs(info.conservation_defect[c]) < 1e-12);
        REQUIRE(std::abs(after[c] - before[c] + info.boundary_flux[c]) < 1e-11);
      }
    }
  }
}

TEST_CASE("time step restriction") {
  const Grid1D gr(-10.0, 10.0, 400);
  const Field f = initialize(make_initial_data(ref(), Shifts{}, {}), gr);
  SolverConfig cfg;
  const double dt = stable_dt(f, cfg, g);
  const double vmin = *std::min_element(f.v.begin(), f.v.end());
  CHECK(dt <= cfg.cfl_parabolic * gr.dx() * gr.dx() * g.R() * vmin /
                  ((g.gamma() - 1.0) * g.kappa()) * (1.0 + 1e-12));
  cfg.implicit_diffusion = true;
  CHECK(stable_dt(f, cfg, g) > 2.0 * dt);
}

TEST_CASE("run emits snapshots and stays deterministic") {
  const Grid1D gr(-20.0, 20.0, 200);
  const Field f = initialize(make_initial_data(ref(), Shifts{}, {}), gr);
  SolverConfig cfg;
  int count = 0;
  RunResult r0 = run(f, ansatz_boundary(ref()), cfg, g, [&](const Field&) { ++count; });
  CHECK(count == 1);
  CHECK(r0.steps == 0);
  CHECK(r0.final.v == f.v);

  cfg.T = 1.0;
  cfg.snapshot_every = 0.25;
  std::vector<double> times;
  const RunResult r1 = run(f, ansatz_boundary(ref()), cfg, g, [&](const Field& s) { times.push_back(s.t); });
  REQUIRE(times.size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(times[k] == doctest::Approx(0.25 * k).epsilon(1e-14));
  CHECK_FALSE(r1.aborted);
  CHECK(r1.max_conservation_defect < 1e-12);
  const RunResult r2 = run(f, ansatz_boundary(ref()), cfg, g);
  CHECK(r2.dt_history == r1.dt_history);
  CHECK(r2.final.v == r1.final.v);
  CHECK(r2.final.E == r1.final.E);
}

TEST_CASE("instability aborts with the last good field") {
  const Grid1D gr(-20.0, 20.0, 200);
  const Field f = initialize(
      make_initial_data(ref(), Shifts{}, {Bump::with_mass(0.0, 2.0, {0.05, 0.05, 0.05})}), gr);
  SolverConfig cfg;
  cfg.T = 50.0;
  cfg.cfl_hyperbolic = 40.0;
  cfg.cfl_parabolic = 40.0;
  cfg.max_halvings = 2;
  const RunResult r = run(f, ansatz_boundary(ref()), cfg, g);
  CHECK(r.aborted);
  REQUIRE(r.abort_kind.has_value());
  CHECK(*r.abort_kind == ErrorKind::positivity_loss);
  CHECK(r.final.t < 50.0);
  for (int i = 0; i < r.final.size(); ++i) REQUIRE(r.final.v[i] > 0.0);
}

TEST_CASE("single shock travels with its profile") {
  const TwoShockSolution sol = build_two_shock(PrimState(1.0, 0.0, 1.0), 0.9, 0.9, g);
  const CompositeAnsatz a(sol, g);
  const Grid1D gr(-40.0, 15.0, 1100);
  const Field f = initialize(make_initial_data(a, Shifts{}, {}), gr);
  SolverConfig cfg;
  cfg.T = 10.0;
  const RunResult r = run(f, ansatz_boundary(a), cfg, g);
  REQUIRE_FALSE(r.aborted);
  const ShockProfile& p = a.profile1();
  const double drift = sup_dev_v(r.final, [&](double x) { return evaluate(p, x - p.s * 10.0).V; });
  CHECK(drift < 1e-3 * sol.delta1);
}

TEST_CASE("implicit and explicit heat conduction agree") {
  const CompositeAnsatz& a = ref();
  const InitialData d = make_initial_data(a, Shifts{}, {Bump::with_mass(2.0, 3.0, {0.0, 0.0, 0.02})});
  const Grid1D gr(-30.0, 30.0, 600);
  SolverConfig cfg;
  cfg.T = 2.0;
  const RunResult e = run(initialize(d, gr), ansatz_boundary(a), cfg, g);
  cfg.implicit_diffusion = true;
  const RunResult i = run(initialize(d, gr), ansatz_boundary(a), cfg, g);
  REQUIRE_FALSE(i.aborted);
  CHECK(i.steps < e.steps);
  double diff = 0.0;
  for (int k = 0; k < gr.n_cells; ++k) diff = std::max(diff, std::abs(e.final.E[k] - i.final.E[k]));
  CHECK(diff < 2e-3);
}

TEST_CASE("resolution warning and snapshot CSV") {
  CHECK_FALSE(resolution_warning(Grid1D(-10.0, 10.0, 1000), ref()).has_value());
  CHECK(resolution_warning(Grid1D(-10.0, 10.0, 20), ref()).has_value());
  const Field f = initialize(make_initial_data(ref(), Shifts{}, {}), Grid1D(-1.0, 1.0, 4));
  std::ostringstream os;
  write_snapshot_csv(f, ref(), os, {{"config_hash", "abc"}});
  const std::string s = os.str();
  CHECK(s.find("# config_hash=abc\n") == 0);
  CHECK(s.find("x,v,u,theta,E,V,U,Theta,dv,du,dtheta\n") != std::string::npos);
}

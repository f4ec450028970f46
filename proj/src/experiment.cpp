#include "cwave/experiment.hpp"

namespace cwave {

std::vector<Bump> mixed_bumps(double amplitude) {
  Bump a;
  a.center = -10.0;
  a.half_width = 5.0;
  a.amplitude = {amplitude, -amplitude, amplitude};
  Bump b;
  b.center = 8.0;
  b.half_width = 4.0;
  b.amplitude = {-amplitude, amplitude, amplitude};
  b.odd = true;
  return {a, b};
}

ExperimentConfig reference_experiment() {
  ExperimentConfig c;
  c.bumps = mixed_bumps(0.01);
  c.solver.T = 200.0;
  c.solver.snapshot_every = 0.5;
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentSink& extra) {
  const GasParams& g = cfg.gas;
  ExperimentResult r(build_two_shock(cfg.z_minus, cfg.v_m, cfg.v_plus, g, cfg.riemann));
  if (!r.solution.warning.empty()) r.warnings.push_back(r.solution.warning);
  const CompositeAnsatz base(r.solution, g, cfg.profile);
  const InitialData data = make_initial_data(base, Shifts{}, cfg.bumps);
  r.mass = initial_mass_vector(data, base);
  const ShiftSolve ss = solve_shifts(r.mass, base);
  r.shifts = ss.shifts;
  r.condition = ss.condition;
  const CompositeAnsatz solved = base.with_shifts(r.shifts);

  r.grid = grid_for_run(r.solution, cfg.solver.T, cfg.x_min, cfg.x_max, cfg.dx, cfg.shock_margin);
  if (auto w = resolution_warning(r.grid, solved)) r.warnings.push_back(*w);
  r.I0 = antiderivative_initial_data(data, solved, r.grid.centers(), cfg.quad_tol).I0;

  Field f0 = initialize(data, r.grid);
  r.run = run(std::move(f0), ansatz_boundary(solved), cfg.solver, g, [&](const Field& s) {
    r.ledger.update(build_frame(s, solved, cfg.frame));
    if (extra) extra(s, solved);
  });
  if (r.run.aborted) r.warnings.push_back("run aborted: " + r.run.abort_message);
  r.verdict = verdict(r.ledger, r.I0, r.solution.delta, r.shifts.beta2);
  return r;
}

}  // namespace cwave

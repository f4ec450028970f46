#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cwave/ansatz.hpp"
#include "cwave/diagnostics.hpp"
#include "cwave/pde_solver.hpp"

namespace cwave {

/// End-to-end run: two-shock data, perturbation, shift solve, simulation, ledger.
struct ExperimentConfig {
  GasParams gas = GasParams::reference();
  PrimState z_minus{1.0, 0.0, 1.0};
  double v_m = 0.9;
  double v_plus = 0.99;
  RiemannOptions riemann;
  std::vector<Bump> bumps;
  double x_min = -120.0;
  double x_max = 160.0;
  double dx = 0.05;
  /// Extra room kept beyond the shock paths; the domain grows to fit them.
  double shock_margin = 25.0;
  SolverConfig solver;
  FrameOptions frame;
  ProfileOptions profile;
  /// Allowed anti-derivative value at +infinity after the shift solve.
  double quad_tol = 1e-8;
};

/// Headline configuration: REF end states, amplitude-0.01 mixed bumps, T = 200.
ExperimentConfig reference_experiment();

/// Mixed-component perturbation of peak size `amplitude`.
std::vector<Bump> mixed_bumps(double amplitude);

struct ExperimentResult {
  explicit ExperimentResult(TwoShockSolution s) : solution(std::move(s)) {}

  TwoShockSolution solution;
  Shifts shifts;
  Vec3 mass{};
  double condition = 0.0;
  double I0 = 0.0;
  Grid1D grid;
  RunResult run;
  EnergyLedger ledger;
  Verdict verdict;
  std::vector<std::string> warnings;
};

/// Receives every snapshot together with the ansatz carrying the solved shifts.
using ExperimentSink = std::function<void(const Field&, const CompositeAnsatz&)>;

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentSink& extra = {});

}  // namespace cwave

#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cwave/ansatz.hpp"
#include "cwave/csv.hpp"
#include "cwave/error.hpp"
#include "cwave/thermo.hpp"

namespace cwave {

/// Uniform cell-centred grid on [x_min, x_max].
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 1;

  Grid1D() = default;
  /// Throws config unless x_max > x_min and n_cells > 0.
  Grid1D(double x_min, double x_max, int n_cells);

  double dx() const { return (x_max - x_min) / n_cells; }
  double x(int i) const { return x_min + (i + 0.5) * dx(); }
  std::vector<double> centers() const;
};

/// Grid of spacing close to `dx` that covers [x_min, x_max] and also keeps
/// both shock paths x = s_i t, t <= T, at least `margin` inside the ends.
Grid1D grid_for_run(const TwoShockSolution& sol, double T, double x_min, double x_max, double dx,
                    double margin);

/// Cell values of (v, u, E) at time t.
struct Field {
  double t = 0.0;
  Grid1D grid;
  std::vector<double> v, u, E;

  int size() const { return grid.n_cells; }
  double theta(int i, const GasParams& g) const { return temperature_from(u[i], E[i], g); }
  /// dx * sum over cells of (v, u, E).
  Vec3 totals() const;
};

/// Far-field state supplied to the ghost cells: (v, u, theta, E) at (x, t).
using BoundaryFn = std::function<Fields(double x, double t)>;

BoundaryFn ansatz_boundary(const CompositeAnsatz& a);
BoundaryFn constant_boundary(const PrimState& z, const GasParams& g);

struct SolverConfig {
  double cfl_hyperbolic = 0.4;
  double cfl_parabolic = 0.25;
  double T = 0.0;
  double snapshot_every = 0.5;
  /// Linear reconstruction with central slopes; false gives first-order Rusanov.
  bool second_order = true;
  /// Crank-Nicolson heat conduction in a Strang splitting; removes the dx^2 limit.
  bool implicit_diffusion = false;
  int max_halvings = 10;

  /// Throws config for non-positive CFL numbers, negative T or cadence.
  void validate() const;
};

/// Field sampled from the data at cell centres. Throws bad_perturbation if
/// v or theta is not positive in some cell.
Field initialize(const InitialData& data, const Grid1D& grid);
/// Same, from an arbitrary point-value function.
Field initialize(const std::function<Fields(double)>& f, const Grid1D& grid,
                 const GasParams& g);

/// Stable time step for the current field.
double stable_dt(const Field& f, const SolverConfig& cfg, const GasParams& g);

struct StepInfo {
  double dt = 0.0;
  int halvings = 0;
  /// Time-integrated flux leaving through the right minus left boundary faces.
  Vec3 boundary_flux{};
  /// dx * sum of cell changes + boundary_flux (zero up to rounding).
  Vec3 conservation_defect{};
};

/// Advances the field by one step of at most `dt_max`. Positivity failures
/// halve dt up to cfg.max_halvings times, then throw positivity_loss; the
/// field is left unchanged in that case.
StepInfo step(Field& f, const BoundaryFn& bc, const SolverConfig& cfg, const GasParams& g,
              double dt_max);

using SnapshotSink = std::function<void(const Field&)>;

struct RunResult {
  Field final;
  long steps = 0;
  std::vector<double> dt_history;
  double max_conservation_defect = 0.0;
  bool aborted = false;
  std::optional<ErrorKind> abort_kind;
  std::string abort_message;
};

/// Advances to cfg.T, sending snapshots at t = 0, every cfg.snapshot_every
/// and at T. Errors abort the run with the last good field in `final`.
RunResult run(Field f, const BoundaryFn& bc, const SolverConfig& cfg, const GasParams& g,
              const SnapshotSink& sink = {});

/// Warning text if dx does not resolve the shock layers (dx > 0.1 / tail rate).
std::optional<std::string> resolution_warning(const Grid1D& grid, const CompositeAnsatz& a);

/// Columns x, v, u, theta, E, V, U, Theta, dv, du, dtheta.
void write_snapshot_csv(const Field& f, const CompositeAnsatz& a, std::ostream& os,
                        const Metadata& extra = {});

}  // namespace cwave

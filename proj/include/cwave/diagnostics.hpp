#pragma once

#include <ostream>
#include <vector>

#include <json.hpp>

#include "cwave/ansatz.hpp"
#include "cwave/csv.hpp"
#include "cwave/pde_solver.hpp"

namespace cwave {

struct FrameOptions {
  int margin = 5;          ///< cells excluded at each end from norms
  double mass_tol = 1e-4;  ///< right-limit drift above which a frame is tainted
};

/// Perturbation of a snapshot against M(., t) and its integrated variables.
struct PerturbationFrame {
  double t = 0.0;
  double dx = 0.0;
  int margin = 5;
  std::vector<double> x;
  std::vector<double> phi, psi, zeta;   ///< v - V, u - U, theta - Theta
  std::vector<double> Phi, Psi, Wbar;   ///< cumulative integrals from the left end
  std::vector<double> W, Wx, xi;
  std::vector<double> U, Ux, weight;    ///< weight = |U1_x| + |U3_x|
  Vec3 right_limit{};
  double consistency = 0.0;  ///< max |D Phi - phi| over the interior
  bool tainted = false;
  double norm3_sq = 0.0;               ///< ||(Phi, Psi, W)||_3^2
  double weighted_integrand = 0.0;     ///< int weight (Psi^2 + W^2)
  double dissipation_integrand = 0.0;  ///< ||(Phi_x, Psi_x, W_x)||_2^2
  double xi_integrand = 0.0;           ///< ||xi||_3^2
  double sup_distance = 0.0;           ///< to the shifted composite wave
};

/// Fourth-order central first derivative, lower order at the two end cells on each side.
std::vector<double> derivative4(const std::vector<double>& f, double dx);

/// Cumulative integral from the left face of cell 0, fourth order in the interior.
std::vector<double> cumulative4(const std::vector<double>& f, double dx, double* right_limit = nullptr);

/// Fills W, Wx, xi and the norms from x, dx, Phi, Psi, Wbar, phi, psi, U, Ux, weight.
void complete_frame(PerturbationFrame& f, const GasParams& g);

PerturbationFrame build_frame(const Field& field, const CompositeAnsatz& a,
                              const FrameOptions& opts = {});

/// max over cells and components of |(v, u, theta) - (v-bar, u-bar, theta-bar)_{beta1, beta3}|.
double sup_distance_to_shifted_composite(const Field& field, const CompositeAnsatz& a);

struct LedgerRow {
  double t = 0.0;
  double norm3 = 0.0;  ///< ||(Phi, Psi, W)(t)||_3
  double N = 0.0;      ///< running max of norm3
  double weighted = 0.0;
  double dissipation = 0.0;
  double xi = 0.0;
  double sup_distance = 0.0;
  double mass_drift = 0.0;
  bool tainted = false;
};

/// Time series of norms and trapezoidal time integrals of the dissipation terms.
class EnergyLedger {
 public:
  /// Throws ordering unless frame.t exceeds the last recorded time.
  void update(const PerturbationFrame& frame);
  const std::vector<LedgerRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

 private:
  std::vector<LedgerRow> rows_;
  double last_weighted_ = 0.0;
  double last_dissipation_ = 0.0;
  double last_xi_ = 0.0;
};

void update_ledger(EnergyLedger& ledger, const PerturbationFrame& frame);

struct VerdictOptions {
  double monotone_after = 20.0;  ///< sup-distance checked for monotonicity from here on
  double wiggle = 0.05;          ///< allowed relative rise over the running minimum
};

struct Verdict {
  double sup_N = 0.0;
  double t_sup_N = 0.0;
  double saturation_weighted = 0.0;  ///< (I(T) - I(T/2)) / I(T)
  double saturation_dissipation = 0.0;
  double saturation_xi = 0.0;
  double lhs = 0.0;
  double rhs_base = 0.0;  ///< ||(Phi0, Psi0, W0)||_3^2 + delta^{1/2} + |beta2|
  double C0 = 0.0;
  bool vacuous = false;
  double I0 = 0.0;
  double distance_initial = 0.0;
  double distance_final = 0.0;
  double distance_ratio = 0.0;
  bool distance_non_increasing = false;
  bool any_tainted = false;
};

Verdict verdict(const EnergyLedger& ledger, double I0, double delta, double beta2,
                const VerdictOptions& opts = {});

nlohmann::json to_json(const Verdict& v);

void write_ledger_csv(const EnergyLedger& ledger, std::ostream& os, const Metadata& extra = {});

}  // namespace cwave

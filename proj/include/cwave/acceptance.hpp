#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwave/experiment.hpp"

namespace cwave {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Configuration of the long two-shock run shared by criteria 7 and 8.
  ExperimentConfig headline = reference_experiment();
  /// Criteria to run; empty runs all of them.
  std::vector<int> only;
  std::uint64_t seed = 7;
};

CriterionResult criterion_rankine_hugoniot();
CriterionResult criterion_entropy();
CriterionResult criterion_profile();
CriterionResult criterion_diffusion_wave(std::uint64_t seed);
CriterionResult criterion_shifts();
CriterionResult criterion_scheme();
CriterionResult criterion_contraction(const ExperimentResult& r);
CriterionResult criterion_energy_bound(const ExperimentResult& r);
CriterionResult criterion_degenerate();

/// Self-convergence order of the scheme on pure diffusion-wave data
/// (beta2 = 0.3 on [-20, 20], T = 10, dx = 0.1, 0.05, 0.025).
double diffusion_wave_convergence_order();

using ProgressFn = std::function<void(const CriterionResult&)>;

/// Runs the selected criteria in order; `progress` sees each result as it completes.
/// The headline run result is stored in `headline_out` when criteria 7 or 8 ran.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const ProgressFn& progress = {},
                                            std::optional<ExperimentResult>* headline_out = nullptr);

std::string format_row(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& rows);

}  // namespace cwave

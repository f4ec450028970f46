#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwave/experiment.hpp"

namespace cwave {

inline constexpr int kSchemaVersion = 1;

/// Validated run configuration. Every key is optional except schema_version;
/// omitted keys take the reference values.
struct RunConfig {
  GasParams gas = GasParams::reference();
  PrimState z_minus{1.0, 0.0, 1.0};
  double v_m = 0.9;
  double v_plus = 0.99;
  /// When set, the end state z_+ replaces the (v_m, v_+) generators.
  std::optional<PrimState> z_plus;
  /// Peak size of the two mixed-component bumps; 0 disables them.
  double mixed_amplitude = 0.01;
  std::vector<Bump> bumps;
  double x_min = -120.0;
  double x_max = 160.0;
  double dx = 0.05;
  double shock_margin = 25.0;
  SolverConfig solver = default_solver();
  double tail_tol = 1e-9;
  double quad_tol = 1e-8;
  RiemannOptions riemann;
  std::string output_dir = "out";
  /// Stride between snapshot files written by simulate (every k-th snapshot).
  int snapshot_stride = 1;
  std::uint64_t seed = 7;

  static SolverConfig default_solver() {
    SolverConfig s;
    s.T = 200.0;
    return s;
  }

  /// Two-shock pattern; throws degenerate when both shocks have zero strength.
  TwoShockSolution solution() const;
  ExperimentConfig experiment() const;

  /// Canonical JSON with every field filled in.
  nlohmann::json to_json() const;
  /// FNV-1a 64-bit hash of the canonical JSON without the output section, as hex.
  std::string hash() const;
};

/// Throws config naming the offending key on unknown keys, wrong types,
/// non-positive tolerances or an unsupported schema version.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace cwave

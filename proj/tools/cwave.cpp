// Command-line driver: riemann, profile, ansatz, simulate, verify.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cwave/acceptance.hpp"
#include "cwave/config.hpp"
#include "cwave/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cwave;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string config;
  std::string out;
  bool force = false;
};

struct Context {
  RunConfig cfg;
  std::string hash;
  fs::path out;
  bool force = false;
  std::string command;

  Metadata meta() const { return {{"config_hash", hash}, {"command", command}}; }

  fs::path target(const std::string& name) const {
    const fs::path p = out / name;
    if (fs::exists(p) && !force) {
      fail(ErrorKind::config, "output " + p.string() + " exists; pass --force to overwrite");
    }
    fs::create_directories(p.parent_path());
    return p;
  }

  void write_json(const std::string& name, json j) const {
    j["config_hash"] = hash;
    j["command"] = command;
    std::ofstream os(target(name));
    os << j.dump(2) << '\n';
  }

  template <class F>
  void write_csv(const std::string& name, F&& body) const {
    std::ofstream os(target(name));
    body(os);
  }
};

Context make_context(const CommonArgs& a, const std::string& command) {
  Context c;
  if (a.config.empty()) {
    c.cfg = parse_config(json{{"schema_version", kSchemaVersion}});
  } else {
    c.cfg = load_config(a.config);
  }
  c.hash = c.cfg.hash();
  c.out = a.out.empty() ? fs::path(c.cfg.output_dir) : fs::path(a.out);
  c.force = a.force;
  c.command = command;
  return c;
}

json state_json(const PrimState& z) { return {z.v(), z.u(), z.theta()}; }
json vec_json(const Vec3& v) { return {v[0], v[1], v[2]}; }

json riemann_report(const TwoShockSolution& s, const GasParams& g) {
  const EntropyReport e = check_entropy(s, g);
  return {{"z_minus", state_json(s.z_minus)},
          {"z_m", state_json(s.z_m)},
          {"z_plus", state_json(s.z_plus)},
          {"s1", s.s1},
          {"s3", s.s3},
          {"delta1", s.delta1},
          {"delta3", s.delta3},
          {"delta", s.delta},
          {"same_order", s.same_order},
          {"within_omega", s.within_omega},
          {"warning", s.warning},
          {"rh_residual", {{"shock1", vec_json(rh_residual(s.shock1, g))},
                           {"shock3", vec_json(rh_residual(s.shock3, g))}}},
          {"entropy",
           {{"lax_1", e.lax_1},
            {"lax_3", e.lax_3},
            {"velocity_order", e.velocity_order},
            {"sign_chain_1a", e.sign_chain_1a},
            {"sign_chain_1b", e.sign_chain_1b},
            {"sign_chain_3a", e.sign_chain_3a},
            {"sign_chain_3b", e.sign_chain_3b},
            {"all", e.all()}}}};
}

int cmd_riemann(const Context& c) {
  const TwoShockSolution s = c.cfg.solution();
  const json j = riemann_report(s, c.cfg.gas);
  std::cout << j.dump(2) << '\n';
  c.write_json("riemann.json", j);
  return 0;
}

json profile_report(const ShockProfile& p) {
  json j = {{"family", p.family},
            {"s", p.s},
            {"delta", p.delta},
            {"samples", p.xi.size()},
            {"warnings", p.warnings}};
  if (p.constant()) return j;
  const ProfileReport r = validate_profile(p);
  j["ok"] = r.ok();
  j["monotone"] = r.monotone;
  j["chain_a"] = r.chain_a;
  j["chain_b"] = r.chain_b;
  j["u_relation_defect"] = r.u_relation_defect;
  j["end_state_error"] = r.end_state_error;
  j["tail_distance"] = r.tail_distance;
  j["decay"] = {{"c", r.fit.c},
                {"C_value", r.fit.C_value},
                {"C_deriv", r.fit.C_deriv},
                {"C_theta", r.fit.C_theta},
                {"rate_left", r.fit.rate_left},
                {"rate_right", r.fit.rate_right},
                {"fitted_rate_left", r.fit.fitted_rate_left},
                {"fitted_rate_right", r.fit.fitted_rate_right}};
  return j;
}

int cmd_profile(const Context& c) {
  const TwoShockSolution s = c.cfg.solution();
  const ExperimentConfig e = c.cfg.experiment();
  const ShockProfile p1 = integrate_profile(s.shock1, c.cfg.gas, e.profile);
  const ShockProfile p3 = integrate_profile(s.shock3, c.cfg.gas, e.profile);
  c.write_csv("profile1.csv", [&](std::ostream& os) { write_profile_csv(p1, os, c.meta()); });
  c.write_csv("profile3.csv", [&](std::ostream& os) { write_profile_csv(p3, os, c.meta()); });
  c.write_json("profiles.json", {{"shock1", profile_report(p1)}, {"shock3", profile_report(p3)}});
  return 0;
}

int cmd_ansatz(const Context& c) {
  const ExperimentConfig e = c.cfg.experiment();
  const TwoShockSolution s = c.cfg.solution();
  const CompositeAnsatz base(s, e.gas, e.profile);
  const InitialData data = make_initial_data(base, Shifts{}, e.bumps);
  const Vec3 mass = initial_mass_vector(data, base);
  const ShiftSolve ss = solve_shifts(mass, base);
  const CompositeAnsatz solved = base.with_shifts(ss.shifts);
  const Grid1D grid = grid_for_run(s, e.solver.T, e.x_min, e.x_max, e.dx, e.shock_margin);
  const std::vector<double> xs = grid.centers();
  const AntiDerivativeData anti = antiderivative_initial_data(data, solved, xs, e.quad_tol);

  std::vector<double> dw_x;
  for (int i = 0; i <= 600; ++i) dw_x.push_back(-30.0 + 0.1 * i);
  c.write_csv("M_t0.csv", [&](std::ostream& os) { write_M_csv(solved, 0.0, xs, os, c.meta()); });
  c.write_csv("antiderivative.csv",
              [&](std::ostream& os) { write_antiderivative_csv(anti, os, c.meta()); });
  c.write_csv("diffusion_wave.csv", [&](std::ostream& os) {
    write_dw_csv(solved.dw(), {0.0, 1.0, 10.0, 100.0}, dw_x, os, c.meta());
  });
  c.write_json("ansatz.json",
               {{"mass", vec_json(mass)},
                {"beta", {ss.shifts.beta1, ss.shifts.beta2, ss.shifts.beta3}},
                {"condition", ss.condition},
                {"solve_residual", ss.residual},
                {"family1_active", ss.family1_active},
                {"family3_active", ss.family3_active},
                {"r1", vec_json(base.r1())},
                {"r2", vec_json(base.r2())},
                {"r3", vec_json(base.r3())},
                {"zero_mass_defect", vec_json(zero_mass_defect(data, solved))},
                {"I0", anti.I0},
                {"norm_H1L1", anti.norm_H1L1},
                {"norm_L2_anti", anti.norm_L2_anti},
                {"right_limit", vec_json(anti.right_limit)},
                {"grid", {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"n_cells", grid.n_cells}}}});
  return 0;
}

int cmd_simulate(const Context& c) {
  const ExperimentConfig e = c.cfg.experiment();
  const int stride = c.cfg.snapshot_stride;
  long index = 0;
  const ExperimentResult r = run_experiment(e, [&](const Field& f, const CompositeAnsatz& a) {
    const bool last = f.t >= e.solver.T;
    if (index % stride == 0 || last) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshots/snapshot_%06ld.csv", index);
      Metadata m = c.meta();
      m.emplace_back("t", fmt_double(f.t));
      c.write_csv(name, [&](std::ostream& os) { write_snapshot_csv(f, a, os, m); });
    }
    ++index;
  });
  c.write_csv("ledger.csv", [&](std::ostream& os) { write_ledger_csv(r.ledger, os, c.meta()); });
  double dt_min = 0.0, dt_max = 0.0;
  if (!r.run.dt_history.empty()) {
    const auto [lo, hi] = std::minmax_element(r.run.dt_history.begin(), r.run.dt_history.end());
    dt_min = *lo;
    dt_max = *hi;
  }
  c.write_json("simulation.json",
               {{"verdict", to_json(r.verdict)},
                {"beta", {r.shifts.beta1, r.shifts.beta2, r.shifts.beta3}},
                {"mass", vec_json(r.mass)},
                {"condition", r.condition},
                {"I0", r.I0},
                {"grid", {{"x_min", r.grid.x_min}, {"x_max", r.grid.x_max}, {"n_cells", r.grid.n_cells}}},
                {"steps", r.run.steps},
                {"final_time", r.run.final.t},
                {"dt_min", dt_min},
                {"dt_max", dt_max},
                {"snapshots", index},
                {"max_conservation_defect", r.run.max_conservation_defect},
                {"aborted", r.run.aborted},
                {"abort_message", r.run.abort_message},
                {"warnings", r.warnings}});
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
  if (r.run.aborted) {
    std::cerr << "error: " << r.run.abort_message << '\n';
    return kExitNumerical;
  }
  return 0;
}

/// Hash embedded in an artifact, or empty if it carries none.
std::string embedded_hash(const fs::path& p) {
  std::ifstream in(p);
  if (p.extension() == ".json") {
    const json j = json::parse(in, nullptr, false);
    if (j.is_object() && j.contains("config_hash") && j["config_hash"].is_string()) {
      return j["config_hash"].get<std::string>();
    }
    return {};
  }
  std::string line;
  while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
    if (line.rfind("# config_hash=", 0) == 0) return line.substr(14);
  }
  return {};
}

void check_hashes(const Context& c) {
  if (!fs::exists(c.out)) return;
  std::set<std::string> seen;
  for (const auto& entry : fs::recursive_directory_iterator(c.out)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (p.extension() != ".json" && p.extension() != ".csv") continue;
    const std::string h = embedded_hash(p);
    if (!h.empty() && h != c.hash) {
      fail(ErrorKind::config, "mixed config hashes: " + p.string() + " has " + h +
                                  ", current config has " + c.hash);
    }
  }
}

int cmd_verify(const Context& c, const std::vector<int>& only) {
  check_hashes(c);
  AcceptanceOptions opts;
  opts.headline = c.cfg.experiment();
  opts.only = only;
  opts.seed = c.cfg.seed;
  int failed = 0;
  const std::vector<CriterionResult> rows = run_acceptance(opts, [&](const CriterionResult& r) {
    std::cout << format_row(r) << std::endl;
    if (!r.passed) ++failed;
  });
  c.write_json("acceptance.json", {{"criteria", to_json(rows)}, {"all_passed", failed == 0}});
  std::cout << failed << " of " << rows.size() << " criteria failed\n";
  return failed == 0 ? 0 : kExitNumerical;
}

void apply_thread_env() {
  const char* v = std::getenv("CWAVE_THREADS");
  if (!v || !*v) return;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) fail(ErrorKind::config, "CWAVE_THREADS must be a positive integer");
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(n));
#endif
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-shock viscous flow experiments"};
  app.require_subcommand(1);
  CommonArgs args;
  std::vector<int> only;

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "JSON run configuration (reference values if omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output directory (overrides output.dir)");
    sub->add_flag("--force", args.force, "overwrite existing outputs");
    return sub;
  };
  CLI::App* riemann = add("riemann", "two-shock Riemann solution and entropy checks");
  CLI::App* profile = add("profile", "viscous shock profiles of both families");
  CLI::App* ansatz = add("ansatz", "shift solve, asymptotic state and initial anti-derivative");
  CLI::App* simulate = add("simulate", "time integration with snapshots and energy ledger");
  CLI::App* verify = add("verify", "acceptance suite, one row per criterion");
  verify->add_option("--only", only, "criterion numbers to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    apply_thread_env();
    if (riemann->parsed()) return cmd_riemann(make_context(args, "riemann"));
    if (profile->parsed()) return cmd_profile(make_context(args, "profile"));
    if (ansatz->parsed()) return cmd_ansatz(make_context(args, "ansatz"));
    if (simulate->parsed()) return cmd_simulate(make_context(args, "simulate"));
    if (verify->parsed()) return cmd_verify(make_context(args, "verify"), only);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::config ? kExitConfig : kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}

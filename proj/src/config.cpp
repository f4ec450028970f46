#include "cwave/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "cwave/error.hpp"

namespace cwave {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
  fail(ErrorKind::config, "key '" + key + "' " + what);
}

/// Reads one JSON object, remembering which keys were consumed.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad_key(path_.empty() ? "<root>" : path_, "must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double def, bool positive = false) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number()) bad_key(join(path_, key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad_key(join(path_, key), "must be finite");
    if (positive && !(x > 0.0)) bad_key(join(path_, key), "must be positive");
    return x;
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) bad_key(join(path_, key), "must be true or false");
    return v.get<bool>();
  }

  long integer(const std::string& key, long def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number_integer()) bad_key(join(path_, key), "must be an integer");
    return v.get<long>();
  }

  std::string text(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_string()) bad_key(join(path_, key), "must be a string");
    return v.get<std::string>();
  }

  Reader child(const std::string& key) {
    static const json empty = json::object();
    if (!has(key)) return Reader(empty, join(path_, key));
    return Reader(raw(key), join(path_, key));
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) bad_key(join(path_, k), "is not recognised");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

PrimState read_state(Reader r, const PrimState& def) {
  const double v = r.number("v", def.v(), true);
  const double u = r.number("u", def.u());
  const double th = r.number("theta", def.theta(), true);
  r.finish();
  return PrimState(v, u, th);
}

json state_json(const PrimState& z) { return {{"v", z.v()}, {"u", z.u()}, {"theta", z.theta()}}; }

Bump read_bump(const json& j, const std::string& path) {
  Reader r(j, path);
  Bump b;
  b.center = r.number("center", 0.0);
  b.half_width = r.number("half_width", 1.0, true);
  if (r.has("amplitude")) {
    const json& a = r.raw("amplitude");
    if (!a.is_array() || a.size() != 3) bad_key(r.path("amplitude"), "must be an array of 3 numbers");
    for (int c = 0; c < 3; ++c) {
      if (!a[c].is_number()) bad_key(r.path("amplitude"), "must be an array of 3 numbers");
      b.amplitude[c] = a[c].get<double>();
    }
  }
  b.odd = r.boolean("odd", false);
  r.finish();
  return b;
}

}  // namespace

RunConfig parse_config(const json& j) {
  Reader root(j, "");
  if (!root.has("schema_version")) bad_key("schema_version", "is required");
  const long version = root.integer("schema_version", 0);
  if (version != kSchemaVersion) {
    bad_key("schema_version", "must be " + std::to_string(kSchemaVersion));
  }
  RunConfig c;

  {
    Reader r = root.child("gas");
    const GasParams d = GasParams::reference();
    const double R = r.number("R", d.R(), true);
    const double gamma = r.number("gamma", d.gamma(), true);
    const double kappa = r.number("kappa", d.kappa(), true);
    const bool regime = r.boolean("theorem_regime", d.theorem_regime());
    r.finish();
    try {
      c.gas = GasParams(R, gamma, kappa, regime);
    } catch (const Error& e) {
      bad_key("gas", std::string("is invalid: ") + e.what());
    }
  }
  {
    Reader r = root.child("states");
    c.z_minus = read_state(r.child("z_minus"), c.z_minus);
    if (r.has("z_plus")) {
      if (r.has("v_m") || r.has("v_plus")) {
        bad_key(r.path("z_plus"), "cannot be combined with v_m / v_plus");
      }
      if (!r.raw("z_plus").is_null()) c.z_plus = read_state(r.child("z_plus"), c.z_minus);
    }
    c.v_m = r.number("v_m", c.v_m, true);
    c.v_plus = r.number("v_plus", c.v_plus, true);
    r.finish();
  }
  {
    Reader r = root.child("perturbation");
    c.mixed_amplitude = r.number("mixed_amplitude", c.mixed_amplitude);
    if (r.has("bumps")) {
      const json& list = r.raw("bumps");
      if (!list.is_array()) bad_key(r.path("bumps"), "must be an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        c.bumps.push_back(read_bump(list[i], r.path("bumps") + "[" + std::to_string(i) + "]"));
      }
    }
    r.finish();
  }
  {
    Reader r = root.child("grid");
    c.x_min = r.number("x_min", c.x_min);
    c.x_max = r.number("x_max", c.x_max);
    c.dx = r.number("dx", c.dx, true);
    c.shock_margin = r.number("shock_margin", c.shock_margin);
    r.finish();
    if (!(c.x_max > c.x_min)) bad_key("grid.x_max", "must exceed grid.x_min");
    if (c.shock_margin < 0.0) bad_key("grid.shock_margin", "must not be negative");
  }
  {
    Reader r = root.child("solver");
    SolverConfig& s = c.solver;
    s.T = r.number("T", s.T);
    s.cfl_hyperbolic = r.number("cfl_hyperbolic", s.cfl_hyperbolic, true);
    s.cfl_parabolic = r.number("cfl_parabolic", s.cfl_parabolic, true);
    s.snapshot_every = r.number("snapshot_every", s.snapshot_every, true);
    s.second_order = r.boolean("second_order", s.second_order);
    s.implicit_diffusion = r.boolean("implicit_diffusion", s.implicit_diffusion);
    s.max_halvings = static_cast<int>(r.integer("max_halvings", s.max_halvings));
    r.finish();
    if (s.T < 0.0) bad_key("solver.T", "must not be negative");
    if (s.max_halvings < 0) bad_key("solver.max_halvings", "must not be negative");
  }
  {
    Reader r = root.child("tolerances");
    c.tail_tol = r.number("tail_tol", c.tail_tol, true);
    c.quad_tol = r.number("quad_tol", c.quad_tol, true);
    c.riemann.rh_tol = r.number("rh_tol", c.riemann.rh_tol, true);
    c.riemann.ratio_bound = r.number("ratio_bound", c.riemann.ratio_bound, true);
    c.riemann.omega_radius = r.number("omega_radius", c.riemann.omega_radius, true);
    r.finish();
  }
  {
    Reader r = root.child("output");
    c.output_dir = r.text("dir", c.output_dir);
    c.snapshot_stride = static_cast<int>(r.integer("snapshot_stride", c.snapshot_stride));
    r.finish();
    if (c.snapshot_stride < 1) bad_key("output.snapshot_stride", "must be at least 1");
  }
  if (root.has("seed")) {
    const json& s = root.raw("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0) {
      bad_key("seed", "must be a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, "config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

TwoShockSolution RunConfig::solution() const {
  TwoShockSolution s = z_plus ? solve_two_shock(z_minus, *z_plus, gas, riemann)
                              : build_two_shock(z_minus, v_m, v_plus, gas, riemann);
  if (s.delta1 == 0.0 && s.delta3 == 0.0) {
    fail(ErrorKind::degenerate, "end states are equal: no shocks to build");
  }
  return s;
}

ExperimentConfig RunConfig::experiment() const {
  ExperimentConfig e;
  e.gas = gas;
  e.z_minus = z_minus;
  if (z_plus) {
    const TwoShockSolution s = solution();
    e.v_m = s.z_m.v();
    e.v_plus = s.z_plus.v();
  } else {
    e.v_m = v_m;
    e.v_plus = v_plus;
  }
  e.riemann = riemann;
  e.bumps = mixed_amplitude != 0.0 ? mixed_bumps(mixed_amplitude) : std::vector<Bump>{};
  e.bumps.insert(e.bumps.end(), bumps.begin(), bumps.end());
  e.x_min = x_min;
  e.x_max = x_max;
  e.dx = dx;
  e.shock_margin = shock_margin;
  e.solver = solver;
  e.profile.tail_tol = tail_tol;
  e.quad_tol = quad_tol;
  return e;
}

nlohmann::json RunConfig::to_json() const {
  json bl = json::array();
  for (const Bump& b : bumps) {
    bl.push_back({{"center", b.center},
                  {"half_width", b.half_width},
                  {"amplitude", {b.amplitude[0], b.amplitude[1], b.amplitude[2]}},
                  {"odd", b.odd}});
  }
  json states = {{"z_minus", state_json(z_minus)}};
  if (z_plus) {
    states["z_plus"] = state_json(*z_plus);
  } else {
    states["v_m"] = v_m;
    states["v_plus"] = v_plus;
  }
  return {
      {"schema_version", kSchemaVersion},
      {"gas",
       {{"R", gas.R()},
        {"gamma", gas.gamma()},
        {"kappa", gas.kappa()},
        {"theorem_regime", gas.theorem_regime()}}},
      {"states", states},
      {"perturbation", {{"mixed_amplitude", mixed_amplitude}, {"bumps", bl}}},
      {"grid", {{"x_min", x_min}, {"x_max", x_max}, {"dx", dx}, {"shock_margin", shock_margin}}},
      {"solver",
       {{"T", solver.T},
        {"cfl_hyperbolic", solver.cfl_hyperbolic},
        {"cfl_parabolic", solver.cfl_parabolic},
        {"snapshot_every", solver.snapshot_every},
        {"second_order", solver.second_order},
        {"implicit_diffusion", solver.implicit_diffusion},
        {"max_halvings", solver.max_halvings}}},
      {"tolerances",
       {{"tail_tol", tail_tol},
        {"quad_tol", quad_tol},
        {"rh_tol", riemann.rh_tol},
        {"ratio_bound", riemann.ratio_bound},
        {"omega_radius", riemann.omega_radius}}},
      {"output", {{"dir", output_dir}, {"snapshot_stride", snapshot_stride}}},
      {"seed", seed},
  };
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash() const {
  json j = to_json();
  j.erase("output");
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

}  // namespace cwave

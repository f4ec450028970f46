#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "cwave/config.hpp"
#include "cwave/error.hpp"

using namespace cwave;
using nlohmann::json;

namespace {

json minimal() { return json{{"schema_version", 1}}; }

std::string config_error(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

}  // namespace

TEST_CASE("defaults are the reference configuration") {
  const RunConfig c = parse_config(minimal());
  CHECK(c.gas.gamma() == 1.4);
  CHECK(c.v_m == 0.9);
  CHECK(c.v_plus == 0.99);
  CHECK(c.solver.T == 200.0);
  CHECK(c.dx == 0.05);
  const TwoShockSolution s = c.solution();
  CHECK(s.s1 == doctest::Approx(-1.261313).epsilon(1e-6));
  const ExperimentConfig e = c.experiment();
  CHECK(e.bumps.size() == 2);
  CHECK(e.quad_tol == 1e-8);
}

TEST_CASE("round trip through canonical JSON") {
  json j = minimal();
  j["perturbation"] = {{"mixed_amplitude", 0.0},
                       {"bumps", {{{"center", 3.0}, {"half_width", 2.0}, {"amplitude", {0.01, 0.0, 0.02}}}}}};
  j["solver"] = {{"T", 5.0}, {"implicit_diffusion", true}};
  j["seed"] = 11;
  const RunConfig c = parse_config(j);
  const RunConfig d = parse_config(c.to_json());
  CHECK(d.to_json() == c.to_json());
  CHECK(d.hash() == c.hash());
  CHECK(d.bumps.size() == 1);
  CHECK(d.bumps[0].amplitude[2] == 0.02);
  CHECK(d.solver.implicit_diffusion);
  CHECK(d.seed == 11);
}

TEST_CASE("hash ignores the output section only") {
  const RunConfig a = parse_config(minimal());
  json j = minimal();
  j["output"] = {{"dir", "elsewhere"}, {"snapshot_stride", 10}};
  CHECK(parse_config(j).hash() == a.hash());
  j["grid"] = {{"dx", 0.1}};
  CHECK(parse_config(j).hash() != a.hash());
  CHECK(a.hash().size() == 16);
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("errors name the offending key") {
  CHECK(config_error(json::object()).find("schema_version") != std::string::npos);
  CHECK(config_error({{"schema_version", 2}}).find("schema_version") != std::string::npos);
  json j = minimal();
  j["grid"] = {{"dxx", 0.1}};
  CHECK(config_error(j).find("grid.dxx") != std::string::npos);
  j = minimal();
  j["tolerances"] = {{"quad_tol", 0.0}};
  CHECK(config_error(j).find("tolerances.quad_tol") != std::string::npos);
  j = minimal();
  j["tolerances"] = {{"rh_tol", -1e-3}};
  CHECK(config_error(j).find("tolerances.rh_tol") != std::string::npos);
  j = minimal();
  j["gas"] = {{"gamma", "1.4"}};
  CHECK(config_error(j).find("gas.gamma") != std::string::npos);
  j = minimal();
  j["perturbation"] = {{"bumps", {{{"center", 0.0}, {"amplitude", {1.0, 2.0}}}}}};
  CHECK(config_error(j).find("perturbation.bumps[0].amplitude") != std::string::npos);
  j = minimal();
  j["states"] = {{"z_plus", {{"v", 1.0}}}, {"v_m", 0.9}};
  CHECK(config_error(j).find("states.z_plus") != std::string::npos);
  j = minimal();
  j["extra"] = 1;
  CHECK(config_error(j).find("'extra'") != std::string::npos);
}

TEST_CASE("end states instead of generators") {
  const RunConfig ref = parse_config(minimal());
  const TwoShockSolution s = ref.solution();
  json j = minimal();
  j["states"] = {{"z_plus", {{"v", s.z_plus.v()}, {"u", s.z_plus.u()}, {"theta", s.z_plus.theta()}}}};
  const RunConfig c = parse_config(j);
  const TwoShockSolution t = c.solution();
  CHECK(t.z_m.v() == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(c.experiment().v_plus == doctest::Approx(0.99).epsilon(1e-14));

  j["states"] = {{"z_plus", {{"v", 1.0}, {"u", 0.0}, {"theta", 1.0}}}};
  try {
    parse_config(j).solution();
    FAIL("expected degenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate);
  }
  j["states"] = {{"v_m", 1.0}, {"v_plus", 1.0}};
  CHECK_THROWS_AS(parse_config(j).solution(), Error);
}

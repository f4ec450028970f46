#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cwave/diagnostics.hpp"

using namespace cwave;

namespace {

const GasParams g = GasParams::reference();

const CompositeAnsatz& ref() {
  static const CompositeAnsatz a(build_two_shock(PrimState(1.0, 0.0, 1.0), 0.9, 0.99, g), g);
  return a;
}

Field sample(const CompositeAnsatz& a, const Grid1D& gr, double t) {
  Field f = initialize([&](double x) { return evaluate_M(x, t, a); }, gr, g);
  f.t = t;
  return f;
}

}  // namespace

TEST_CASE("difference and quadrature stencils are fourth order") {
  auto err = [](double dx) {
    const int n = static_cast<int>(std::lround(6.0 / dx));
    std::vector<double> f(n), x(n);
    for (int i = 0; i < n; ++i) {
      x[i] = (i + 0.5) * dx;
      f[i] = std::sin(x[i]);
    }
    double rl = 0.0;
    const std::vector<double> d = derivative4(f, dx);
    const std::vector<double> F = cumulative4(f, dx, &rl);
    double ed = 0.0, eF = 0.0;
    for (int i = 5; i < n - 5; ++i) {
      ed = std::max(ed, std::abs(d[i] - std::cos(x[i])));
      eF = std::max(eF, std::abs((F[i] - F[5]) - (std::cos(x[5]) - std::cos(x[i]))));
    }
    return std::make_pair(ed, eF);
  };
  const auto [d1, F1] = err(0.1);
  const auto [d2, F2] = err(0.05);
  CHECK(std::log2(d1 / d2) > 3.8);
  CHECK(std::log2(F1 / F2) > 3.8);
  double rl = 0.0;
  cumulative4({1.0, 1.0, 1.0, 1.0}, 0.5, &rl);
  CHECK(rl == doctest::Approx(2.0));
}

TEST_CASE("frame of the asymptotic state vanishes") {
  const CompositeAnsatz a = ref().with_shifts({0.5, 0.04, -0.5});
  const Grid1D gr(-40.0, 40.0, 800);
  const PerturbationFrame f = build_frame(sample(a, gr, 3.0), a);
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    REQUIRE(std::abs(f.phi[i]) < 1e-14);
    REQUIRE(std::abs(f.psi[i]) < 1e-14);
    REQUIRE(std::abs(f.zeta[i]) < 1e-14);
    REQUIRE(std::abs(f.Phi[i]) < 1e-12);
    REQUIRE(std::abs(f.W[i]) < 1e-12);
  }
  CHECK(f.norm3_sq < 1e-24);
  CHECK_FALSE(f.tainted);
}

TEST_CASE("temperature reconstruction identity") {
  const CompositeAnsatz& a = ref();
  const Grid1D gr(-30.0, 30.0, 1200);
  const InitialData d = make_initial_data(
      a, Shifts{}, {Bump::with_mass(-4.0, 3.0, {0.004, -0.003, 0.006})});
  SolverConfig cfg;
  cfg.T = 1.0;
  const RunResult r = run(initialize(d, gr), ansatz_boundary(a), cfg, g);
  const PerturbationFrame f = build_frame(r.final, a);
  double e = 0.0, z = 0.0;
  for (int i = f.margin; i < static_cast<int>(f.x.size()) - f.margin; ++i) {
    e = std::max(e, std::abs(f.xi[i] - f.zeta[i]));
    z = std::max(z, std::abs(f.zeta[i]));
  }
  CHECK(z > 1e-4);
  CHECK(e < 1e-6);
  CHECK(f.consistency < 1e-6);
}

TEST_CASE("planted Gaussian velocity anti-derivative") {
  const double gr1 = (g.gamma() - 1.0) / g.R();
  auto run_case = [&](double dx) {
    PerturbationFrame f;
    const int n = static_cast<int>(std::lround(20.0 / dx));
    f.dx = dx;
    f.margin = 5;
    for (int i = 0; i < n; ++i) {
      const double x = -10.0 + (i + 0.5) * dx;
      f.x.push_back(x);
      const double G = 0.01 * std::exp(-x * x);
      f.Phi.push_back(0.0);
      f.phi.push_back(0.0);
      f.Wbar.push_back(0.0);
      f.Psi.push_back(G);
      f.psi.push_back(-2.0 * x * G);
      f.U.push_back(-0.1 + 0.05 * std::tanh(x));
      f.Ux.push_back(0.05 / std::pow(std::cosh(x), 2));
      f.weight.push_back(0.0);
    }
    complete_frame(f, g);
    double e = 0.0;
    for (int i = 5; i < n - 5; ++i) {
      const double exact = -gr1 * (f.U[i] * f.psi[i] + 0.5 * f.psi[i] * f.psi[i]);
      e = std::max(e, std::abs(f.xi[i] - exact));
    }
    return e;
  };
  const double e1 = run_case(0.1), e2 = run_case(0.05);
  CHECK(e1 < 1e-5);
  CHECK(std::log2(e1 / e2) > 3.5);
}

TEST_CASE("distance to the shifted composite") {
  const CompositeAnsatz a = ref().with_shifts({1.0, 0.0, -1.0});
  const Grid1D gr(-40.0, 40.0, 400);
  Field f = initialize([&](double x) { return composite_bar_m(x, 2.0, a); }, gr, g);
  f.t = 2.0;
  CHECK(sup_distance_to_shifted_composite(f, a) == 0.0);

  const CompositeAnsatz w = ref().with_shifts({0.0, 0.05, 0.0});
  const Grid1D wide(-80.0, 80.0, 1600);
  std::vector<double> ts, ds;
  for (double t : {10.0, 20.0, 40.0, 80.0}) {
    const double d = sup_distance_to_shifted_composite(sample(w, wide, t), w);
    ts.push_back(t);
    ds.push_back(d);
  }
  for (std::size_t i = 1; i < ds.size(); ++i) CHECK(ds[i] < ds[i - 1]);
  // Heat-kernel sup: theta deviation is beta2 / sqrt(4 pi a (1+t)) at the centre.
  const double expect = 0.05 / std::sqrt(4.0 * M_PI * w.dw().a() * 81.0);
  CHECK(ds.back() == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("ledger accumulation") {
  EnergyLedger L;
  const CompositeAnsatz& a = ref();
  const Grid1D gr(-30.0, 30.0, 600);
  for (double t : {0.0, 0.5, 1.0}) L.update(build_frame(sample(a, gr, t), a));
  for (const LedgerRow& r : L.rows()) {
    CHECK(r.weighted < 1e-24);
    CHECK(r.dissipation < 1e-24);
    CHECK(r.norm3 < 1e-12);
  }
  CHECK_THROWS_AS(L.update(build_frame(sample(a, gr, 1.0), a)), Error);
  try {
    update_ledger(L, build_frame(sample(a, gr, 0.5), a));
    FAIL("expected ordering error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ordering);
  }
  const Verdict v = verdict(L, 0.0, 0.0, 0.0);
  CHECK(v.vacuous);
}

TEST_CASE("ledger on a perturbed run") {
  const CompositeAnsatz& a = ref();
  const Grid1D gr(-40.0, 40.0, 800);
  const InitialData d = make_initial_data(
      a, Shifts{}, {Bump::with_mass(-4.0, 3.0, {0.004, -0.003, 0.006})});
  const Vec3 mass = initial_mass_vector(d, a);
  const CompositeAnsatz solved = a.with_shifts(solve_shifts(mass, a).shifts);
  SolverConfig cfg;
  cfg.T = 4.0;
  cfg.snapshot_every = 0.5;
  EnergyLedger L;
  run(initialize(d, gr), ansatz_boundary(solved), cfg, g,
      [&](const Field& s) { L.update(build_frame(s, solved)); });
  REQUIRE(L.rows().size() == 9);
  for (std::size_t i = 1; i < L.rows().size(); ++i) {
    const LedgerRow& p = L.rows()[i - 1];
    const LedgerRow& r = L.rows()[i];
    CHECK(r.weighted >= p.weighted);
    CHECK(r.dissipation >= p.dissipation);
    CHECK(r.xi >= p.xi);
    CHECK(r.N >= p.N);
    CHECK(r.mass_drift < 1e-6);
  }
  const Verdict v = verdict(L, 0.1, solved.solution().delta, solved.shifts().beta2);
  CHECK_FALSE(v.vacuous);
  CHECK(v.C0 > 0.0);
  CHECK(v.saturation_dissipation > 0.0);
  CHECK(v.saturation_dissipation < 1.0);
  const nlohmann::json j = to_json(v);
  CHECK(j.at("C0").get<double>() == v.C0);
  CHECK(j.at("distance").at("ratio").get<double>() == v.distance_ratio);
  std::ostringstream os;
  write_ledger_csv(L, os, {{"config_hash", "x"}});
  CHECK(os.str().find("t,norm3,N,weighted,dissipation,xi,sup_distance,mass_drift,tainted\n") !=
        std::string::npos);
}

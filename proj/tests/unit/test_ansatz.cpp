#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cwave/ansatz.hpp"
#include "cwave/error.hpp"

using namespace cwave;

namespace {

const GasParams g = GasParams::reference();

const CompositeAnsatz& ref() {
  static const CompositeAnsatz a(build_two_shock(PrimState(1.0, 0.0, 1.0), 0.9, 0.99, g), g);
  return a;
}

double vec_err(const Vec3& a, const Vec3& b) {
  return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1);
  return x;
}

}  // namespace

TEST_CASE("wave basis") {
  const CompositeAnsatz& a = ref();
  const PrimState& zm = a.z_m();
  CHECK(a.r2()[0] == doctest::Approx(g.R() / pressure(zm, g)).epsilon(1e-15));
  CHECK(a.r2()[1] == 0.0);
  CHECK(a.r2()[2] == 1.0);
  CHECK(a.r1()[0] == doctest::Approx(-0.1).epsilon(1e-14));
  CHECK(a.r3()[0] == doctest::Approx(0.09).epsilon(1e-13));
  CHECK(std::isfinite(a.basis_condition()));
  CHECK(a.basis_condition() > 1.0);
}

TEST_CASE("bump masses") {
  const Bump b = Bump::with_mass(3.0, 2.0, {0.1, -0.2, 0.05});
  const Vec3 m = b.mass();
  CHECK(vec_err(m, {0.1, -0.2, 0.05}) < 1e-15);
  // Midpoint-rule oracle.
  double s = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) s += b.value(1.0 + 4.0 * (i + 0.5) / n)[0] * 4.0 / n;
  CHECK(s == doctest::Approx(0.1).epsilon(1e-9));
  Bump odd = b;
  odd.odd = true;
  CHECK(odd.mass()[0] == 0.0);
  CHECK(b.value(5.0)[0] == 0.0);
  CHECK(b.value(0.99)[0] == 0.0);
}

TEST_CASE("composite far fields and cross term") {
  const CompositeAnsatz& a = ref();
  const TwoShockSolution& sol = a.solution();
  for (double t : {0.0, 5.0}) {
    const Fields l = composite_bar_m(-300.0, t, a);
    const Fields r = composite_bar_m(300.0, t, a);
    CHECK(l.v == doctest::Approx(sol.z_minus.v()).epsilon(1e-12));
    CHECK(std::abs(l.u - sol.z_minus.u()) < 1e-12);
    CHECK(l.theta == doctest::Approx(sol.z_minus.theta()).epsilon(1e-12));
    CHECK(r.v == doctest::Approx(sol.z_plus.v()).epsilon(1e-12));
    CHECK(r.u == doctest::Approx(sol.z_plus.u()).epsilon(1e-12));
    CHECK(r.theta == doctest::Approx(sol.z_plus.theta()).epsilon(1e-12));
  }
  const double k = (g.gamma() - 1.0) / g.R();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xs(-20.0, 20.0), ts(0.0, 10.0);
  const double um = a.z_m().u();
  for (int i = 0; i < 100; ++i) {
    const double x = xs(rng), t = ts(rng);
    const ProfileSample z1 = evaluate(a.profile1(), x - a.profile1().s * t);
    const ProfileSample z3 = evaluate(a.profile3(), x - a.profile3().s * t);
    REQUIRE(std::abs(composite_cross_term(x, t, a) + k * (z1.U - um) * (z3.U - um)) < 1e-12);
  }
  // The cross term is largest at t = 0 and decays as the shocks separate.
  auto sup_cross = [&](double t) {
    double s = 0.0;
    for (double x : grid(-40.0 + a.profile1().s * t, 40.0 + a.profile3().s * t, 4001))
      s = std::max(s, std::abs(composite_cross_term(x, t, a)));
    return s;
  };
  CHECK(sup_cross(20.0) < 0.1 * sup_cross(0.0));
}

TEST_CASE("mass of shifted and perturbed composites") {
  const CompositeAnsatz& a = ref();
  const InitialData unshifted = make_initial_data(a, Shifts{}, {});
  CHECK(vec_err(initial_mass_vector(unshifted, a), {0.0, 0.0, 0.0}) < 1e-10);

  const double mu = 0.03;
  const InitialData bump = make_initial_data(
      a, Shifts{}, {Bump::with_mass(4.0, 3.0, {mu * a.r2()[0], 0.0, mu})});
  CHECK(vec_err(initial_mass_vector(bump, a), {mu * g.R() / pressure(a.z_m(), g), 0.0, mu}) <
        1e-12);

  const InitialData shifted = make_initial_data(a, Shifts{2.0, 0.0, -1.0}, {});
  const Vec3 m = initial_mass_vector(shifted, a);
  const Vec3 expect{2.0 * a.r1()[0] - a.r3()[0], 2.0 * a.r1()[1] - a.r3()[1],
                    2.0 * a.r1()[2] - a.r3()[2]};
  CHECK(vec_err(m, expect) < 1e-9);
}

TEST_CASE("shift solve") {
  const CompositeAnsatz& a = ref();
  const ShiftSolve z = solve_shifts({0.0, 0.0, 0.0}, a);
  CHECK(z.shifts.beta1 == 0.0);
  CHECK(z.shifts.beta2 == 0.0);
  CHECK(z.shifts.beta3 == 0.0);
  const ShiftSolve e2 = solve_shifts(a.r2(), a);
  CHECK(std::abs(e2.shifts.beta1) < 1e-14);
  CHECK(e2.shifts.beta2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(e2.shifts.beta3) < 1e-14);

  // Planted round trip.
  const double b2 = 0.05;
  const InitialData data = make_initial_data(
      a, Shifts{2.0, 0.0, -1.0}, {Bump::with_mass(0.0, 4.0, {b2 * a.r2()[0], 0.0, b2})});
  const Vec3 mass = initial_mass_vector(data, a);
  const ShiftSolve s = solve_shifts(mass, a);
  CHECK(std::abs(s.shifts.beta1 - 2.0) < 1e-6);
  CHECK(std::abs(s.shifts.beta2 - b2) < 1e-6);
  CHECK(std::abs(s.shifts.beta3 + 1.0) < 1e-6);
  CHECK(s.residual < 1e-12 * std::sqrt(mass[0] * mass[0] + mass[1] * mass[1] + mass[2] * mass[2]));
  const CompositeAnsatz solved = a.with_shifts(s.shifts);
  CHECK(vec_err(zero_mass_defect(data, solved), {0.0, 0.0, 0.0}) < 1e-8);

  // Near-degenerate basis.
  CHECK_THROWS_AS(solve_shifts(mass, a, 1.0), Error);
}

TEST_CASE("delta times shift stays bounded") {
  // Fixed r2-free mass; beta_i scale like 1/delta_i so delta_i beta_i stays bounded.
  const Vec3 mass{0.01, 0.0, 0.0};
  double prev = 0.0;
  for (double eps : {0.1, 0.05, 0.02}) {
    const TwoShockSolution sol = build_two_shock(PrimState(1.0, 0.0, 1.0), 1.0 - eps, 1.0 - 0.1 * eps, g);
    const CompositeAnsatz a(sol, g);
    const ShiftSolve s = solve_shifts(mass, a);
    const double p = std::abs(sol.delta1 * s.shifts.beta1) + std::abs(sol.delta3 * s.shifts.beta3);
    CHECK(std::isfinite(p));
    if (prev > 0.0) CHECK(p < 3.0 * prev);
    prev = p;
  }
}

TEST_CASE("asymptotic state") {
  const CompositeAnsatz& a = ref();
  const CompositeAnsatz shifted = a.with_shifts({1.5, 0.0, -0.5});
  // beta2 = 0 reduces to the shifted composite.
  for (double x : {-7.0, -0.3, 0.0, 2.2, 9.0}) {
    const Fields m = evaluate_M(x, 3.0, shifted);
    const Fields c = composite_bar_m(x, 3.0, shifted);
    CHECK(m.v == c.v);
    CHECK(m.u == c.u);
    CHECK(m.theta == c.theta);
  }
  const CompositeAnsatz full = a.with_shifts({1.5, 0.05, -0.5});
  const TwoShockSolution& sol = a.solution();
  const Fields l = evaluate_M(-400.0, 2.0, full), r = evaluate_M(400.0, 2.0, full);
  CHECK(l.v == doctest::Approx(sol.z_minus.v()).epsilon(1e-12));
  CHECK(r.theta == doctest::Approx(sol.z_plus.theta()).epsilon(1e-12));
  const Fields c = evaluate_M(0.0, 0.0, full);
  CHECK(c.theta > a.z_m().theta());
  CHECK_THROWS_AS(evaluate_M(0.0, 0.0, a.with_shifts({0.0, -40.0, 0.0})), Error);
}

TEST_CASE("residual defects vanish") {
  const CompositeAnsatz full = ref().with_shifts({1.0, 0.05, -2.0});
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> xs(-15.0, 15.0), ts(0.0, 8.0);
  for (int i = 0; i < 60; ++i) {
    const double x = xs(rng), t = ts(rng);
    const AnsatzResidual r = ansatz_residual(x, t, full);
    REQUIRE(std::abs(r.defect[0]) < 1e-12);
    REQUIRE(std::abs(r.defect[1]) < 1e-11);
    REQUIRE(std::abs(r.defect[2]) < 1e-11);
  }
}

TEST_CASE("residual against finite differences") {
  const CompositeAnsatz full = ref().with_shifts({1.0, 0.05, -2.0});
  const double h = 1e-4;
  for (double x : {-3.0, 0.4, 2.5}) {
    const double t = 1.0;
    const AnsatzResidual r = ansatz_residual(x, t, full);
    const double fd =
        (ansatz_residual(x + h, t, full).R1[0] - ansatz_residual(x - h, t, full).R1[0]) / (2 * h);
    CHECK(std::abs(fd - r.R1[1]) < 1e-7);
    // Momentum balance by finite differences of M.
    auto M = [&](double y, double s) { return evaluate_M(y, s, full); };
    auto P = [&](double y, double s) {
      const Fields f = M(y, s);
      return g.R() * f.theta / f.v;
    };
    const double d2 = (M(x, t + h).u - M(x, t - h).u) / (2 * h) + (P(x + h, t) - P(x - h, t)) / (2 * h) -
                      r.R1[1];
    CHECK(std::abs(d2) < 1e-7);
  }
}

TEST_CASE("single shock has no residual") {
  const TwoShockSolution sol = build_two_shock(PrimState(1.0, 0.0, 1.0), 0.9, 0.9, g);
  const CompositeAnsatz a(sol, g);
  CHECK(a.profile3().constant());
  const CompositeAnsatz s = a.with_shifts({0.7, 0.0, 0.0});
  for (double x : {-5.0, -1.0, 0.0, 0.5, 4.0}) {
    for (double t : {0.0, 2.0}) {
      const AnsatzResidual r = ansatz_residual(x, t, s);
      for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(r.R1[k]) < 1e-14);
        CHECK(std::abs(r.R2[k]) < 1e-14);
      }
    }
  }
  // A single shock drops beta3 from the solve.
  const ShiftSolve ss = solve_shifts(a.r2(), a);
  CHECK_FALSE(ss.family3_active);
  CHECK(ss.shifts.beta3 == 0.0);
}

TEST_CASE("residual envelope") {
  const CompositeAnsatz full = ref().with_shifts({0.0, 0.02, 0.0});
  std::vector<double> times{0.0, 2.0, 5.0, 10.0, 20.0};
  std::vector<double> sups;
  for (double t : times) {
    sups.push_back(residual_sup(full, t, grid(-30.0 - 1.3 * t, 30.0 + 1.3 * t, 1201)));
  }
  const double C = residual_envelope_constant(full, times, sups, 0.5);
  CHECK(std::isfinite(C));
  CHECK(C > 0.0);
  CHECK(C < 100.0);
}

TEST_CASE("anti-derivative of the initial perturbation") {
  const CompositeAnsatz& a = ref();
  const std::vector<double> x = grid(-40.0, 40.0, 1601);

  SUBCASE("data equal to the asymptotic state") {
    const InitialData d = make_initial_data(a, Shifts{}, {});
    const AntiDerivativeData ad = antiderivative_initial_data(d, a, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      REQUIRE(ad.Phi[i] == 0.0);
      REQUIRE(ad.Psi[i] == 0.0);
      REQUIRE(ad.Wbar[i] == 0.0);
    }
    CHECK(ad.I0 == 0.0);
  }

  SUBCASE("odd velocity bump") {
    Bump b;
    b.center = 5.0;
    b.half_width = 2.0;
    b.amplitude = {0.0, 0.02, 0.0};
    b.odd = true;
    const InitialData d = make_initial_data(a, Shifts{}, {b});
    const AntiDerivativeData ad = antiderivative_initial_data(d, a, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      REQUIRE(std::abs(ad.Phi[i]) < 1e-15);
      REQUIRE(std::abs(ad.Wbar[i]) < 1e-15);
      if (x[i] < b.lo() || x[i] > b.hi()) REQUIRE(std::abs(ad.Psi[i]) < 1e-15);
    }
    CHECK(ad.I0 > 0.0);
  }

  SUBCASE("massive volume bump before cancellation") {
    const double I = 0.01;
    const InitialData d =
        make_initial_data(a, Shifts{}, {Bump::with_mass(-10.0, 2.0, {I, 0.0, 0.0})});
    const Vec3 mass = initial_mass_vector(d, a);
    const CompositeAnsatz solved = a.with_shifts(solve_shifts(mass, a).shifts);
    // Against the unshifted composite the mass does not cancel.
    CHECK_THROWS_AS(antiderivative_initial_data(d, a, x), Error);
    const AntiDerivativeData ad = antiderivative_initial_data(d, solved, x);
    CHECK(std::abs(ad.right_limit[0]) < 1e-8);
    CHECK(std::abs(ad.right_limit[1]) < 1e-8);
    CHECK(std::abs(ad.right_limit[2]) < 1e-8);
    CHECK(ad.norm_L2_anti > 0.0);
  }
}

TEST_CASE("bump oracle for the anti-derivative") {
  // A volume bump far from both shocks, measured against the data's own base:
  // the mismatch check is bypassed with a loose tolerance.
  const CompositeAnsatz& a = ref();
  const double I = 0.01;
  const Bump b = Bump::with_mass(-25.0, 2.0, {I, 0.0, 0.0});
  const InitialData d = make_initial_data(a, Shifts{}, {b});
  const AntiDerivativeData ad = antiderivative_initial_data(d, a, grid(-40.0, -20.0, 801), 1.0);
  double sup = 0.0;
  for (double p : ad.Phi) sup = std::max(sup, std::abs(p));
  CHECK(sup == doctest::Approx(I).epsilon(1e-10));
  CHECK(ad.Phi.back() == doctest::Approx(I).epsilon(1e-10));
}

TEST_CASE("ansatz CSV") {
  const CompositeAnsatz full = ref().with_shifts({0.0, 0.05, 0.0});
  std::ostringstream os;
  write_M_csv(full, 1.0, {-1.0, 0.0, 1.0}, os);
  CHECK(os.str().find("x,V,U,Theta,R1,R2\n") != std::string::npos);
  const InitialData d = make_initial_data(ref(), Shifts{}, {});
  std::ostringstream os2;
  write_antiderivative_csv(antiderivative_initial_data(d, ref(), grid(-5.0, 5.0, 11)), os2);
  CHECK(os2.str().find("x,Phi,Psi,Wbar,W\n") != std::string::npos);
}

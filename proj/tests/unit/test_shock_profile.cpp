#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cwave/error.hpp"
#include "cwave/shock_profile.hpp"

using namespace cwave;

namespace {

const GasParams g = GasParams::reference();
const PrimState z_minus(1.0, 0.0, 1.0);

TwoShockSolution ref_solution() { return build_two_shock(z_minus, 0.9, 0.99, g); }

// Raw (unfactored) flux as first written down, for comparison.
double h_raw(double V, double s, double vm, double pm) {
  const double gm = g.gamma(), s2 = s * s, w = V - vm;
  return s * g.R() * V * (0.5 * (gm + 1) * s2 * w * w - (gm * pm - s2 * vm) * w) /
         ((gm - 1) * (pm - s2 * vm - 2 * s2 * w));
}

}  // namespace

TEST_CASE("h_flux zeros, sign, and reference values") {
  const ShockData sd = ref_solution().shock1;
  CHECK(h_flux(1.0, sd, g) == 0.0);
  CHECK(h_flux(0.9, sd, g) == 0.0);
  // 40-digit evaluation of the raw flux at the midpoint.
  CHECK(h_flux(0.95, sd, g) == doctest::Approx(-0.033109451754061791691).epsilon(1e-13));
  for (int i = 1; i < 100; ++i) {
    const double V = 0.9 + 0.1 * i / 100.0;
    CHECK(h_flux(V, sd, g) < 0.0);
    const double pm = pressure(sd.right, g);
    CHECK(h_flux(V, sd, g) == doctest::Approx(h_raw(V, sd.s, 0.9, pm)).epsilon(1e-12));
  }
  CHECK(h_flux_derivative(0.9, sd, g) == doctest::Approx(-1.986567105243707501).epsilon(1e-13));
  CHECK(h_flux_derivative(1.0, sd, g) == doctest::Approx(1.018752361663439744).epsilon(1e-13));
  const double pm = pressure(sd.right, g);
  const double s2 = sd.s * sd.s;
  const double closed = -sd.s * g.R() * 0.9 * (g.gamma() * pm - s2 * 0.9) /
                        ((g.gamma() - 1) * (pm - s2 * 0.9));
  CHECK(h_flux_derivative(0.9, sd, g) == doctest::Approx(closed).epsilon(1e-13));
  const double h = 1e-5;
  const double fd = (h_flux(0.95 + h, sd, g) - h_flux(0.95 - h, sd, g)) / (2 * h);
  CHECK(h_flux_derivative(0.95, sd, g) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("3-family flux derivatives") {
  const ShockData sd = ref_solution().shock3;
  CHECK(h_flux(0.9, sd, g) == 0.0);
  CHECK(h_flux(0.99, sd, g) == 0.0);
  CHECK(h_flux(0.95, sd, g) > 0.0);
  CHECK(h_flux_derivative(0.9, sd, g) == doctest::Approx(1.712877363863614036).epsilon(1e-12));
  CHECK(h_flux_derivative(0.99, sd, g) == doctest::Approx(-0.9420825501249877200).epsilon(1e-12));
}

TEST_CASE("REF 1-shock profile") {
  const ShockData sd = ref_solution().shock1;
  const ShockProfile p = integrate_profile(sd, g);
  REQUIRE(p.xi.size() > 100);
  CHECK(p.warnings.empty());
  CHECK(evaluate_V(p, 0.0) == 0.95);
  for (std::size_t i = 1; i < p.V.size(); ++i) REQUIRE(p.V[i] < p.V[i - 1]);

  // Independent oracle: xi(V) = kappa * integral of dV / H(V) from the anchor.
  CHECK(evaluate_V(p, 0.93794048175316069285) == doctest::Approx(0.92).epsilon(1e-9));
  CHECK(evaluate_V(p, -1.1508831531952647549) == doctest::Approx(0.98).epsilon(1e-9));
  CHECK(std::abs(evaluate_V(p, 3.833523879096099442) - 0.9001) < 1e-10);
  CHECK(std::abs(evaluate_V(p, -6.47310934683474822) - 0.9999) < 1e-10);

  const ProfileReport r = validate_profile(p);
  CHECK(r.ok());
  CHECK(r.u_relation_defect < 1e-14);
  CHECK(r.end_state_error < 1e-10);
  CHECK(r.tail_distance < 1.01e-9);
  CHECK(r.fit.c > 0.0);
  CHECK(std::isfinite(r.fit.C_value));
  CHECK(r.fit.C_theta < 10.0);
  CHECK(std::abs(r.fit.fitted_rate_right / r.fit.rate_right - 1.0) < 0.05);
  CHECK(std::abs(r.fit.fitted_rate_left / r.fit.rate_left - 1.0) < 0.05);
  CHECK(r.fit.rate_right == doctest::Approx(-1.986567105243707501));

  const ProfileSample far_right = evaluate(p, 1e3);
  CHECK(far_right.V == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(far_right.U == doctest::Approx(sd.right.u()).epsilon(1e-14));
  const ProfileSample far_left = evaluate(p, -1e3);
  CHECK(std::abs(far_left.U - 0.0) < 1e-13);
  CHECK(std::abs(far_left.Theta - 1.0) < 1e-12);
}

TEST_CASE("profile samples and interpolation") {
  const ShockProfile p = integrate_profile(ref_solution().shock1, g);
  for (std::size_t i = 0; i < p.xi.size(); i += 37) {
    const ProfileSample z = evaluate(p, p.xi[i]);
    CHECK(z.V == p.V[i]);
    CHECK(z.U == p.U[i]);
    CHECK(z.Theta == p.Theta[i]);
  }
  // Dense resampling keeps strict monotonicity.
  double prev = evaluate_V(p, p.xi.front() - 1.0);
  for (std::size_t i = 0; i + 1 < p.xi.size(); ++i) {
    for (int k = 1; k <= 10; ++k) {
      const double x = p.xi[i] + (p.xi[i + 1] - p.xi[i]) * k / 10.0;
      const double v = evaluate_V(p, x);
      REQUIRE(v < prev + 1e-15);
      REQUIRE(v <= p.V[i]);
      REQUIRE(v >= p.V[i + 1]);
      prev = v;
    }
  }
  // Tail extension is continuous in value and slope at the last sample.
  const double xe = p.xi.back(), h = 1e-6;
  CHECK(evaluate_V(p, xe + h) - p.V.back() ==
        doctest::Approx(h * p.V_xi.back()).epsilon(1e-4));
}

TEST_CASE("recovered velocity and temperature") {
  const ShockData sd = ref_solution().shock1;
  const ShockProfile p = integrate_profile(sd, g);
  const ProfileSample at_m = recover_from_V(p, 0.9);
  CHECK(at_m.U == sd.right.u());
  CHECK(at_m.Theta == sd.right.theta());
  const ProfileSample at_l = recover_from_V(p, 1.0);
  CHECK(std::abs(at_l.U - 0.0) < 1e-10);
  CHECK(std::abs(at_l.Theta - 1.0) < 1e-10);
  for (std::size_t i = 0; i < p.V.size(); ++i) {
    REQUIRE(p.U[i] == doctest::Approx(sd.right.u() - sd.s * (p.V[i] - 0.9)).epsilon(1e-14));
  }
}

TEST_CASE("3-family profile is the mirror of the reflected 1-family profile") {
  const ShockData sd3 = ref_solution().shock3;
  const ShockProfile p3 = integrate_profile(sd3, g);
  const ShockProfile m = reflect(integrate_profile(sd3.reflected(), g));
  CHECK(p3.family == 3);
  CHECK(p3.s == sd3.s);
  for (double xi = -30.0; xi <= 30.0; xi += 0.173) {
    const ProfileSample a = evaluate(p3, xi);
    const ProfileSample b = evaluate(m, xi);
    REQUIRE(std::abs(a.V - b.V) < 1e-10);
    REQUIRE(std::abs(a.U - b.U) < 1e-10);
    REQUIRE(std::abs(a.Theta - b.Theta) < 1e-10);
  }
  for (std::size_t i = 1; i < p3.V.size(); ++i) REQUIRE(p3.V[i] > p3.V[i - 1]);
  // The mirrored samples satisfy the 3-family equation directly.
  for (std::size_t i = 0; i < p3.V.size(); i += 11) {
    REQUIRE(std::abs(g.kappa() * p3.V_xi[i] - h_flux(p3.V[i], sd3, g)) < 1e-14);
  }
  const ProfileReport r = validate_profile(p3);
  CHECK(r.ok());
  CHECK(std::abs(r.fit.fitted_rate_left / r.fit.rate_left - 1.0) < 0.05);
  CHECK(std::abs(r.fit.fitted_rate_right / r.fit.rate_right - 1.0) < 0.05);
  CHECK(evaluate(p3, -1e3).U == doctest::Approx(sd3.left.u()).epsilon(1e-13));
  CHECK(evaluate(p3, 1e3).Theta == doctest::Approx(sd3.right.theta()).epsilon(1e-9));
}

TEST_CASE("profile jets follow the profile equation") {
  const ShockData sd = ref_solution().shock1;
  const ShockProfile p = integrate_profile(sd, g);
  for (double xi : {-4.0, -0.7, 0.0, 0.31, 2.5}) {
    const ProfileJet<4> j = profile_jet<4>(p, xi);
    CHECK(j.V.value() == evaluate_V(p, xi));
    CHECK(j.V.derivative(1) == doctest::Approx(h_flux(j.V.value(), sd, g)).epsilon(1e-14));
    const double h = 1e-3;
    const double fd2 =
        (evaluate_V(p, xi + h) - 2 * evaluate_V(p, xi) + evaluate_V(p, xi - h)) / (h * h);
    CHECK(std::abs(j.V.derivative(2) - fd2) < 1e-5);
    const ProfileJet<4> jp = profile_jet<4>(p, xi + h);
    const ProfileJet<4> jm = profile_jet<4>(p, xi - h);
    CHECK(std::abs(j.V.derivative(4) - (jp.V.derivative(3) - jm.V.derivative(3)) / (2 * h)) <
          1e-5);
    CHECK(j.U.derivative(1) == doctest::Approx(-sd.s * j.V.derivative(1)).epsilon(1e-14));
  }
}

TEST_CASE("zero-strength shock gives a constant profile") {
  const TwoShockSolution single = build_two_shock(z_minus, 0.9, 0.9, g);
  const ShockProfile p = integrate_profile(single.shock3, g);
  CHECK(p.constant());
  CHECK(p.xi.size() == 1);
  const ProfileSample z = evaluate(p, 17.0);
  CHECK(z.V == 0.9);
  CHECK(z.U == single.z_m.u());
  CHECK(z.Theta == single.z_m.theta());
  CHECK(validate_profile(p).ok());
  const ProfileJet<3> j = profile_jet<3>(p, 1.0);
  CHECK(j.V.derivative(1) == 0.0);
}

TEST_CASE("profile sign conditions are enforced") {
  ShockData sd = ref_solution().shock1;
  sd.s = -0.5;  // too slow to satisfy the sign chains
  CHECK_THROWS_AS(integrate_profile(sd, g), Error);
}

TEST_CASE("profile CSV export") {
  const ShockProfile p = integrate_profile(ref_solution().shock1, g);
  std::ostringstream os;
  write_profile_csv(p, os, {{"config_hash", "abc"}});
  const std::string s = os.str();
  CHECK(s.find("# config_hash=abc\n") == 0);
  CHECK(s.find("# family=1\n") != std::string::npos);
  CHECK(s.find("# anchor=midpoint\n") != std::string::npos);
  CHECK(s.find("xi,V,U,Theta\n") != std::string::npos);
}

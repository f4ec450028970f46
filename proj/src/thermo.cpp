#include "cwave/thermo.hpp"

#include <cmath>
#include <sstream>

#include "cwave/error.hpp"

namespace cwave {

GasParams::GasParams(double R, double gamma, double kappa, bool theorem_regime)
    : R_(R), gamma_(gamma), kappa_(kappa), theorem_regime_(theorem_regime) {
  if (!(R > 0.0) || !std::isfinite(R)) fail(ErrorKind::domain, "gas constant R must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    fail(ErrorKind::domain, "heat conduction kappa must be positive");
  }
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) fail(ErrorKind::domain, "gamma must be >= 1");
  if (theorem_regime && !(gamma < 3.0)) {
    fail(ErrorKind::out_of_regime, "theorem regime requires 1 <= gamma < 3");
  }
}

PrimState::PrimState(double v, double u, double theta) : v_(v), u_(u), theta_(theta) {
  if (!(v > kPositivityFloor) || !(theta > kPositivityFloor) || !std::isfinite(u) ||
      !std::isfinite(v) || !std::isfinite(theta)) {
    std::ostringstream os;
    os << "invalid primitive state (v=" << v << ", u=" << u << ", theta=" << theta << ")";
    fail(ErrorKind::domain, os.str());
  }
}

double PrimState::internal_energy(const GasParams& g) const {
  return g.R() / (g.gamma() - 1.0) * theta_;
}

ConservedState::ConservedState(double v, double u, double E, const GasParams& g)
    : v_(v), u_(u), E_(E) {
  if (!(v > kPositivityFloor) || !(temperature_from(u, E, g) > kPositivityFloor) ||
      !std::isfinite(u) || !std::isfinite(E)) {
    std::ostringstream os;
    os << "invalid conserved state (v=" << v << ", u=" << u << ", E=" << E << ")";
    fail(ErrorKind::domain, os.str());
  }
}

double pressure(const PrimState& z, const GasParams& g) { return g.R() * z.theta() / z.v(); }

double sound_speed(const PrimState& z, const GasParams& g) {
  return std::sqrt(g.gamma() * pressure(z, g) / z.v());
}

Vec3 eigenvalues(const PrimState& z, const GasParams& g) {
  const double c = sound_speed(z, g);
  return {-c, 0.0, c};
}

ConservedState to_conserved(const PrimState& z, const GasParams& g) {
  return ConservedState(z.v(), z.u(), z.theta() + g.kinetic_factor() * z.u() * z.u(), g);
}

PrimState from_conserved(const ConservedState& m, const GasParams& g) {
  const double theta = temperature_from(m.u(), m.E(), g);
  if (!(theta > kPositivityFloor)) fail(ErrorKind::domain, "recovered temperature not positive");
  return PrimState(m.v(), m.u(), theta);
}

}  // namespace cwave

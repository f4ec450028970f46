#pragma once

#include <stdexcept>
#include <string>

namespace cwave {

/// Failure categories raised by the numerical modules.
enum class ErrorKind {
  domain,               ///< non-physical state (v or theta not positive)
  not_compressive,      ///< shock generator does not compress
  out_of_regime,        ///< parameters outside the range the construction covers
  no_two_shock_solution,
  wrong_wave_pattern,   ///< end states violate the two-shock entropy ordering
  degenerate,           ///< zero-strength configuration where one is not allowed
  singular_flux,        ///< profile flux denominator vanishes
  regime,               ///< derived temperature or volume not positive
  divergence,           ///< improper integral of a non-decaying difference
  conditioning,         ///< nearly dependent wave basis
  mass_mismatch,        ///< anti-derivative does not vanish at +infinity
  bad_perturbation,     ///< perturbed initial data loses positivity
  positivity_loss,      ///< time stepping could not keep v, theta positive
  ordering,             ///< diagnostics frames out of time order
  config,               ///< malformed configuration
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::not_compressive: return "not a compressive shock";
    case ErrorKind::out_of_regime: return "out of regime";
    case ErrorKind::no_two_shock_solution: return "no two-shock solution";
    case ErrorKind::wrong_wave_pattern: return "wrong wave pattern";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::singular_flux: return "singular flux";
    case ErrorKind::regime: return "regime error";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::mass_mismatch: return "mass mismatch";
    case ErrorKind::bad_perturbation: return "bad perturbation";
    case ErrorKind::positivity_loss: return "positivity loss";
    case ErrorKind::ordering: return "ordering";
    case ErrorKind::config: return "config error";
  }
  return "error";
}

}  // namespace cwave

#ifndef TRAPREACT_ERRORS_HPP
#define TRAPREACT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trapreact {

// Base class for all numerical/domain failures raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Gamma-family argument sits on a pole (z = 0, -1, -2, ...).
class PoleError : public Error {
 public:
  using Error::Error;
};

// Result magnitude exceeds the representable double range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A function parameter (not the argument) sits on a pole, e.g. Kummer b
// a nonpositive integer, or integer b passed to the Tricomi connection path.
class ParameterPoleError : public Error {
 public:
  using Error::Error;
};

// A series or iteration failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Argument on a branch cut (principal branch only).
class BranchError : public Error {
 public:
  using Error::Error;
};

// The target function threw while a root finder was probing it.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested energy is not an eigenvalue of the stored problem.
class NonEigenvalueError : public Error {
 public:
  using Error::Error;
};

// Gap metric is monotone over the search range: no avoided crossing inside.
class NoCrossingError : public Error {
 public:
  using Error::Error;
};

// Root continuation failed after step halving down to the minimum step.
class LostBranchError : public Error {
 public:
  using Error::Error;
};

// AQW matching denominator vanished (resonance pole at real energy).
class DegenerateWellError : public Error {
 public:
  using Error::Error;
};

// energy_dependent_a called at kappa = 0; use zero_energy_a instead.
class ZeroKappaError : public Error {
 public:
  using Error::Error;
};

// Zero-energy scattering length diverges: eta*e^{i alpha} + e^{-i alpha} = 0.
class ResonancePoleError : public Error {
 public:
  using Error::Error;
};

// Wavefunction node at the matching radius: the plain log-derivative is
// singular there (the matching solver switches to a node-free residual).
class NodeAtBoundaryError : public Error {
 public:
  using Error::Error;
};

// An eigenvalue with positive imaginary part was fed to a decay routine.
class GainError : public Error {
 public:
  using Error::Error;
};

// Decay-rate fit received unusable data.
class FitError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration input (species registry, CLI ranges).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace trapreact

#endif

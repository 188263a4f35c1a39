#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperconnect {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

/// Distance below which a parameter counts as sitting on a gamma pole.
inline constexpr double kPoleTolerance = 1e-8;

/// Distance below which beta_i or beta_i - beta_j counts as an integer
/// (the non-resonance assumption). Recurrence denominators degrade as
/// O(distance), so the error model is unreliable below this.
inline constexpr double kIntegerTolerance = 1e-6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument within tolerance of a non-positive integer (gamma pole).
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Term sequence failed to decay within the configured term cap.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Series at unit argument with non-negative convergence exponent.
class DivergentAtOne : public Error {
 public:
  using Error::Error;
};

/// The non-resonance assumption (some beta or beta difference is an
/// integer within tolerance) does not hold.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

/// A resonant order's forced equation was violated beyond tolerance.
/// This would indicate a logarithmic solution, which the non-resonance
/// assumption excludes, so it signals an implementation failure.
class ResonanceInconsistency : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class BranchAmbiguity : public Error {
 public:
  using Error::Error;
};

/// A diagonal entry of the D matrix vanishes.
class SingularD : public Error {
 public:
  using Error::Error;
};

/// Oracle linear system condition number exceeds the configured cap.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// An asymptotic-formula denominator m + alpha - s - alpha_j is within
/// tolerance of zero.
class DenominatorHit : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperconnect

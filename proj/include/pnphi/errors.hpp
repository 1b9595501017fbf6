#pragma once

#include <stdexcept>
#include <string>

namespace pnphi {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed literals ("2,1;1,1", "5,7|3") or bad option values.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A documented precondition was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A matrix required to be an automorphism of Z^n has |det| != 1.
class NonUnimodularError : public PreconditionError {
 public:
  using Error::Error;
};

// A standing spectral hypothesis (hyperbolic, diagonalizable, positive
// real spectrum) does not hold for the given matrix.
class HypothesisError : public PreconditionError {
 public:
  using Error::Error;
};

// An element/size budget was exhausted; carries the last fully completed
// BFS radius so partial results are never silently truncated.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, int completed_radius)
      : Error(what), completed_radius_(completed_radius) {}
  int completed_radius() const noexcept { return completed_radius_; }

 private:
  int completed_radius_;
};

// A sampled certification (adapted norm, orbit window) could not be
// established within the configured limits. Never a silent pass.
class CertificationError : public Error {
 public:
  using Error::Error;
};

// A value exceeds the fixed-width range of an internal fast path.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A mathematically guaranteed property failed on concrete data.
class InvariantViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace pnphi

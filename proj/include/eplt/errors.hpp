#pragma once

#include <stdexcept>
#include <string>

namespace eplt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions or subsystem shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be Hermitian is not, beyond the tolerance.
class NotHermitianError : public Error {
 public:
  using Error::Error;
};

/// An operator fails the density-operator invariants. Carries the smallest
/// eigenvalue when the failure is a positivity violation.
class NotAStateError : public Error {
 public:
  NotAStateError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  explicit NotAStateError(const std::string& what) : NotAStateError(what, 0.0) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// A map fails trace preservation or a local map is not a channel.
class NotAChannelError : public Error {
 public:
  using Error::Error;
};

/// A mixing parameter lies outside the range that keeps the construction a
/// local thermalization. Carries the admissible upper limit.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, double limit) : Error(what), limit_(limit) {}

  double limit() const noexcept { return limit_; }

 private:
  double limit_;
};

/// The thermal marginals admit no entanglement-preserving local
/// thermalization (pure zero-temperature marginal).
class NoEpltError : public Error {
 public:
  using Error::Error;
};

/// A state lies outside the family on which a decision procedure is exact.
class NotInFamilyError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration or argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace eplt

#pragma once

#include <stdexcept>
#include <string>

namespace rlm {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Mesh level too large for the addressable index space.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// A point was queried outside of the mesh domain.
class OutOfDomainError : public Error {
public:
  using Error::Error;
};

/// Invalid or inconsistent inclusion geometry.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Invalid numeric parameter (negative kappa, bad index, size mismatch).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Factorization breakdown or singular block.
class SolverError : public Error {
public:
  using Error::Error;
};

/// Iterative solver ran out of iterations.
class EffortExceededError : public SolverError {
public:
  EffortExceededError(const std::string &what, double best_residual)
      : SolverError(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

private:
  double best_residual_;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// Configuration rejected; message names the offending key path.
class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace rlm

namespace rlm {

/// Failure of one experiment case; the message carries the case identity.
class CaseError : public Error {
public:
  using Error::Error;
};

} // namespace rlm

#pragma once

#include <stdexcept>
#include <string>

namespace darwinlab {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument to a library call (size mismatch, out-of-range n, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed configuration file or --set override.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Requested size exceeds what a dense or exhaustive route can handle.
class InfeasibleSize : public Error {
 public:
  using Error::Error;
};

// A checked physical invariant failed during a run.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Krylov propagation could not reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace darwinlab

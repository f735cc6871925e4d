#pragma once

#include <stdexcept>
#include <string>

namespace lcf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition was violated by the caller (bad parameter, NaN input, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative solve did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace lcf

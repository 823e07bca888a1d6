#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmsdr {

// Base of every error raised by the library. `module()` names the component
// that detected the failure so command-line diagnostics can point at it.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Bad input or a violated precondition. Maps to CLI exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// Shape or symmetry contract broken by the caller.
class ContractError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical failure during a fit. Maps to CLI exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericError {
 public:
  SingularMatrixError(std::string module, std::size_t pivot, double value)
      : NumericError(std::move(module),
                     "non-positive pivot " + std::to_string(value) +
                         " at index " + std::to_string(pivot)),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class DivergenceError : public NumericError {
 public:
  DivergenceError(std::string module, double eta)
      : NumericError(std::move(module),
                     "iterate became non-finite; learning rate eta=" +
                         std::to_string(eta) + " is too large"),
        eta_(eta) {}

  double eta() const noexcept { return eta_; }

 private:
  double eta_;
};

}  // namespace pmsdr

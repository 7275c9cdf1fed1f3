#pragma once

#include <stdexcept>
#include <string>

namespace wigner {

/// Base of every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// Caller violated an operation's precondition (grid mismatch, bad parity, ...).
class ContractError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "contract"; }
};

/// Argument outside the region where a quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/// Requested capability not supported (derivative order, moment order).
class CapabilityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "capability"; }
};

/// A numerical procedure failed to reach its tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double estimate = 0.0)
      : Error(what), estimate_(estimate) {}
  const char* kind() const noexcept override { return "numerical"; }
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// Non-finite values appeared while marching in x.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, double x_reached)
      : NumericalError(what, x_reached) {}
  const char* kind() const noexcept override { return "divergence"; }
  double x_reached() const noexcept { return estimate(); }
};

/// Boundary assembly matrix singular or too badly conditioned.
class AssemblyError : public NumericalError {
 public:
  AssemblyError(const std::string& what, double condition)
      : NumericalError(what, condition) {}
  const char* kind() const noexcept override { return "assembly"; }
  double condition() const noexcept { return estimate(); }
};

/// Truncated moment reconstruction is ill-posed at the requested order.
class IllPosedError : public NumericalError {
 public:
  IllPosedError(const std::string& what, double condition)
      : NumericalError(what, condition) {}
  const char* kind() const noexcept override { return "ill_posed"; }
};

/// Run configuration rejected by the validator.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const char* kind() const noexcept override { return "validation"; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace wigner

#pragma once

#include <stdexcept>
#include <string>

namespace robust_reserve {

/// Raised when an input violates a documented precondition. `code()` is a
/// stable machine-readable tag such as "rho_out_of_range".
class DomainError : public std::invalid_argument {
 public:
  DomainError(std::string code, const std::string& what)
      : std::invalid_argument(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Adaptive quadrature failed to reach its absolute tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace robust_reserve

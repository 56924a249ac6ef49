#pragma once

#include <stdexcept>
#include <string>

namespace bmcopula {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid simulation or command configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An adaptive quadrature did not reach its requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Conditional inversion failed while sampling a copula.
class InversionError : public std::runtime_error {
 public:
  InversionError(const std::string& what, double u, double w)
      : std::runtime_error(what + " at (u=" + std::to_string(u) + ", w=" + std::to_string(w) + ")"),
        u_(u),
        w_(w) {}

  double u() const noexcept { return u_; }
  double w() const noexcept { return w_; }

 private:
  double u_;
  double w_;
};

inline void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

}  // namespace bmcopula

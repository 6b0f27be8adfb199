#pragma once

#include <stdexcept>
#include <string>

namespace mix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Requested particle number cannot be placed in the orbitals (e.g. more fermions than orbitals).
class InfeasibleSectorError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

class SmallDenominatorError : public Error {
 public:
  SmallDenominatorError(const std::string& what, int term) : Error(what), term_(term) {}
  int term() const noexcept { return term_; }

 private:
  int term_;
};

class DependencyError : public Error {
 public:
  using Error::Error;
};

class ObservableError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mix

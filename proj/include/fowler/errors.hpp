#pragma once

#include <stdexcept>
#include <string>

namespace fowler {

/// Base class for every error raised by the library.
class FowlerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a mathematical operation (e.g. a symbol at xi = 0).
class DomainError : public FowlerError {
 public:
  using FowlerError::FowlerError;
};

/// Array sizes or grids that do not match.
class ShapeError : public FowlerError {
 public:
  using FowlerError::FowlerError;
};

/// Invalid configuration. `field` names the offending key.
class ConfigError : public FowlerError {
 public:
  ConfigError(std::string field, const std::string& what)
      : FowlerError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Quadrature did not reach the requested tolerance.
class QuadratureError : public FowlerError {
 public:
  QuadratureError(const std::string& what, double achieved)
      : FowlerError(what + " (achieved tolerance " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Solution left the representable range (NaN, overflow or sup|u| above the threshold).
class BlowUpError : public FowlerError {
 public:
  BlowUpError(double time, double sup)
      : FowlerError("blow-up at t = " + std::to_string(time) + " (sup|u| = " + std::to_string(sup) + ")"),
        time_(time), sup_(sup) {}
  double time() const noexcept { return time_; }
  double sup() const noexcept { return sup_; }

 private:
  double time_;
  double sup_;
};

/// Picard fixed-point iteration failed to contract (iteration cap or ball escape).
class PicardError : public FowlerError {
 public:
  PicardError(const std::string& what, double residual)
      : FowlerError(what + " (last residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Dense linear solve hit a singular matrix.
class SingularMatrixError : public FowlerError {
 public:
  using FowlerError::FowlerError;
};

}  // namespace fowler

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace nhscat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad kernel file, inconsistent grid, invalid device spec.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. k <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Base for failures of a numerical method on otherwise valid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The discretized scattering system is not invertible at this k.
class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(double k, double pivot_ratio)
      : NumericalError("scattering system non-invertible at this k (k = " + format(k) +
                       ", relative pivot " + format(pivot_ratio) + ")"),
        k_(k),
        pivot_ratio_(pivot_ratio) {}

  double k() const noexcept { return k_; }
  double pivot_ratio() const noexcept { return pivot_ratio_; }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }

  double k_;
  double pivot_ratio_;
};

/// Adjoint amplitudes diverge: T^l T^r - R^l R^r vanishes.
class DivergenceError : public NumericalError {
 public:
  explicit DivergenceError(double abs_denominator)
      : NumericalError("adjoint amplitudes diverge: |Tl*Tr - Rl*Rr| = " +
                       std::to_string(abs_denominator)),
        abs_denominator_(abs_denominator) {}

  double abs_denominator() const noexcept { return abs_denominator_; }

 private:
  double abs_denominator_;
};

/// Inverse design did not reach its acceptance threshold.
class DesignError : public NumericalError {
 public:
  DesignError(const std::string& what, double best_residual)
      : NumericalError(what + " (best residual " + std::to_string(best_residual) + ")"),
        best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// A requested device is incompatible with the requested symmetry constraint.
class ForbiddenDeviceError : public InputError {
 public:
  using InputError::InputError;
};

/// Scalar root bracketing failed; the message carries the scan trace.
class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace nhscat

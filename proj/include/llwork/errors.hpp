// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace llwork {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure of any kind (CLI exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A quantity that is only defined off the contact set x_i == x_j was
/// evaluated on it.
class ContactError : public Error {
 public:
  using Error::Error;
};

/// Newton/fixed-point iteration did not reach tolerance.  Carries the best
/// iterate seen and its residual.
class SolverError : public NumericError {
 public:
  SolverError(const std::string& what, std::vector<double> best_iterate, double residual)
      : NumericError(what), best_iterate_(std::move(best_iterate)), residual_(residual) {}

  const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }
  double residual() const noexcept { return residual_; }

 private:
  std::vector<double> best_iterate_;
  double residual_;
};

/// Enumeration cutoff too small for the requested tail tolerance.
class CutoffError : public NumericError {
 public:
  CutoffError(const std::string& what, double tail_bound)
      : NumericError(what), tail_bound_(tail_bound) {}
  double tail_bound() const noexcept { return tail_bound_; }

 private:
  double tail_bound_;
};

/// Initial and final spectra do not enumerate the same state labels.
class PairingError : public Error {
 public:
  using Error::Error;
};

/// Request outside the supported range (e.g. compression quench, N > 2 for
/// symmetrized references).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace llwork

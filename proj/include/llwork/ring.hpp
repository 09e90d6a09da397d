// SPDX-License-Identifier: Apache-2.0
//
// Bethe-ansatz eigenstates of N delta-interacting bosons on a ring.
//
//   k_l lambda - 2 pi I_l + 2 sum_j theta(k_l - k_j) = 0,
//   theta(k) = arctan(2 hbar^2 k / C),  E = sum_l hbar^2 k_l^2.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "llwork/core.hpp"

namespace llwork::ring {

/// Strictly increasing Bethe quantum numbers.  Stored doubled so that
/// half-integers are exact: twice[l] = 2 I_l.
class QuantumNumbers {
 public:
  /// Throws ConfigError if the sequence is not strictly increasing or if the
  /// parity does not match the particle number (integers for odd N,
  /// half-integers for even N).
  explicit QuantumNumbers(std::vector<int> twice);
  static QuantumNumbers from_values(const std::vector<double>& values);

  std::size_t size() const noexcept { return twice_.size(); }
  double operator[](std::size_t l) const { return 0.5 * twice_[l]; }
  const std::vector<int>& twice() const noexcept { return twice_; }
  std::string str() const;

  friend bool operator==(const QuantumNumbers&, const QuantumNumbers&) = default;
  friend auto operator<=>(const QuantumNumbers& a, const QuantumNumbers& b) { return a.twice_ <=> b.twice_; }

 private:
  std::vector<int> twice_;
};

/// theta(k) = arctan(2 hbar^2 k / C).  C = +inf gives 0; C = 0 gives the
/// +-pi/2 boundary value (0 at k = 0).
double theta(double k, double coupling, double hbar = 1.0);
/// d theta / dk.
double theta_prime(double k, double coupling, double hbar = 1.0);

struct BetheState {
  QuantumNumbers quantum_numbers;
  std::vector<double> rapidities;
  double length;
  double coupling;
  double hbar;
  double energy;
  /// max_l |F_l|, F_l the Bethe equation in phase form.
  double residual;
  int iterations;
};

struct BetheOptions {
  double tol = 1e-12;
  int max_iterations = 200;
};

/// Bethe residual vector F_l(k).
std::vector<double> bethe_residual(const std::vector<double>& k, const QuantumNumbers& qn, double length,
                                   double coupling, double hbar);

/// Damped Newton solve.  The iteration minimizes the convex Yang-Yang action
/// whose gradient is the residual, so backtracking on the action always
/// makes progress.  Warm start k_l = 2 pi I_l / lambda.  Throws SolverError
/// with the best iterate when tol is not reached.
BetheState solve_bethe(const QuantumNumbers& qn, double length, double coupling, double hbar = 1.0,
                       const BetheOptions& options = {});

struct SpectrumTable {
  std::vector<BetheState> states;  // ascending energy, ties by quantum numbers
  int n_particles;
  double length;
  double coupling;
  double hbar;
  double beta;
  double i_max;
  /// Upper bound on the Boltzmann weight of omitted states relative to Z.
  double tail_bound;
};

/// Upper bound on sum of e^{-beta E} over quantum-number sets with some
/// |I_l| > i_max (absolute, not normalized).  Uses |k_l| lambda >=
/// 2 pi |I_l| - (N - 1) pi.
double tail_weight_bound(int n_particles, double length, double hbar, double beta, double i_max);

/// All strictly increasing sets with max |I_l| <= i_max, each solved.
/// Throws CutoffError if tail_tolerance is given and tail_bound exceeds it.
SpectrumTable enumerate_states(const ModelSpec& model, double i_max, double beta,
                               std::optional<double> tail_tolerance = std::nullopt,
                               const BetheOptions& options = {});

/// Smallest lattice cutoff whose relative tail bound is below tail_tolerance
/// (using the ground state weight as a lower bound on Z).
double choose_i_max(const ModelSpec& model, double beta, double tail_tolerance);

/// Convenience: choose_i_max followed by enumerate_states.
SpectrumTable enumerate_auto(const ModelSpec& model, double beta, double tail_tolerance,
                             const BetheOptions& options = {});

/// Number of sets enumerate_states would produce.
std::size_t count_states(int n_particles, double i_max);

/// Z = sum e^{-beta E} over the table (minimum energy factored for
/// stability, then restored).
double partition_function(const SpectrumTable& table, double beta);

/// Free-fermion (C = inf) energy of a label set at length lambda.
double free_fermion_energy(const QuantumNumbers& qn, double length, double hbar = 1.0);

}  // namespace llwork::ring

// SPDX-License-Identifier: Apache-2.0
//
// Moving-wall dynamics of the two-particle box.
//
// With psi(x, t) = lambda^{-1} chi(x / lambda) the wavefunction lives on the
// fixed unit square and obeys
//   i hbar d chi/dt = [T / lambda^2 + (C / lambda) V + i hbar (v / lambda) Y] chi,
// where Y is the (real antisymmetric) dilation generator in the pair basis.
// The full propagator on the Galerkin space is integrated with a
// fourth-order Magnus scheme and step doubling.
#pragma once

#include <vector>

#include "llwork/box.hpp"

namespace llwork::propagate {

using linalg::CMatrix;
using linalg::CVector;
using linalg::Matrix;
using linalg::Vector;

/// Single-mode dilation matrix A(m, n) = int_0^1 u_m (y d/dy + 1/2) u_n dy,
/// antisymmetric.
Matrix single_mode_dilation(int cutoff);

/// Dilation generator on the symmetric pair basis.
Matrix pair_dilation(const box::PairBasis& basis);

struct PropagateOptions {
  /// Local error target per step (max entry of the propagator increment).
  double step_tolerance = 1e-9;
  /// Final |norm - 1| allowed on every column.
  double norm_tolerance = 1e-8;
  double initial_step = 0.0;  // 0: duration / 64
  /// Step error is measured on the propagated columns of the lowest
  /// `tracked_states` initial eigenstates (0: every column).  Unitarity, and
  /// with it the norm and the Jarzynski sum, does not depend on this choice;
  /// only the accuracy of the untracked, near-cutoff states does.
  std::size_t tracked_states = 0;
  long max_steps = 2000000;
};

struct RampResult {
  Vector initial_energies;
  Vector final_energies;
  /// transition(i, f) = P(n_f | n_i)
  Matrix transition;
  double max_norm_drift;
  long steps;
  long rejected;
  double step_tolerance;
  double norm_tolerance;
};

/// Propagates the whole Galerkin space through the ramp and projects onto
/// the initial and final instantaneous eigenbases.  Throws NumericError if
/// the norm drift exceeds the tolerance.
RampResult propagate_ramp(const ModelSpec& model, const LinearRamp& ramp, int cutoff,
                          const PropagateOptions& options = {});

struct CoefficientTrajectory {
  std::vector<double> times;
  /// coefficients[s](n) = <n(lambda(t_s)) | psi(t_s)>
  std::vector<CVector> coefficients;
  std::vector<double> norm_drift;
  double max_norm_drift;
  long steps;
  long rejected;
};

/// Evolution of one initial eigenstate, sampled at `samples` equally spaced
/// times including both endpoints.
CoefficientTrajectory propagate(const LinearRamp& ramp, std::size_t initial_state, const ModelSpec& model,
                                int cutoff, const PropagateOptions& options = {}, std::size_t samples = 11);

}  // namespace llwork::propagate

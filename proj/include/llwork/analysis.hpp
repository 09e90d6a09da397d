// SPDX-License-Identifier: Apache-2.0
//
// Cross-checks built from work distributions: Bose-Fermi duality of P(W)
// and convergence of the interacting gas toward distinguishable particles
// at high temperature.
#pragma once

#include <optional>
#include <vector>

#include "llwork/ndp.hpp"
#include "llwork/work.hpp"

namespace llwork::analysis {

/// |a_n - b_n| / <|W|^n>_b for n = 1, 2.
struct MomentGaps {
  double first;
  double second;
};
MomentGaps moment_gaps(const work::WorkDistribution& a, const work::WorkDistribution& reference);

struct DualityOptions {
  work::WorkCutoffs cutoffs{};
  ndp::NdpOptions reference{};
  /// Work resolution for the Kolmogorov distance, as a fraction of the
  /// reference mean |W|.
  double resolution_fraction = 1e-2;
  /// Side of the block of states used for the literal fermionization test.
  int fermionized_block = 4;
  std::size_t fermionized_grid = 128;
};

struct DualityReport {
  double alpha;
  double coupling;
  double beta;
  std::string protocol;
  double kolmogorov_raw;
  double kolmogorov;  // with work resolution
  double resolution;
  MomentGaps gaps;
  double boson_mean, boson_second, fermion_mean, fermion_second;
  double boson_tail_mass, fermion_tail_mass;
  /// Transition block computed from bosonic and from fermionized grid
  /// amplitudes gives identical doubles.
  bool fermionized_identical;
  work::WorkDistribution boson;
  work::WorkDistribution fermion;
};

/// Box, N = 2: bosons at alpha (C = 2 hbar^2 alpha / lambda_i) against the
/// independently computed free-fermion distribution.
DualityReport duality_work_check(double alpha, const Protocol& protocol, double beta, double hbar = 1.0,
                                 const DualityOptions& options = {});

/// Transition probabilities |<f|i>|^2 between box eigenstates, evaluated by
/// trapezoid quadrature of grid amplitudes on [0, lambda_f]^2 (initial
/// states extended by zero), optionally after multiplying both by A(x).
work::Matrix grid_transition_block(const box::BoxSpectrum& initial, const box::BoxSpectrum& final_spectrum,
                                   int block, std::size_t grid_points, bool fermionized);

struct ConvergenceRow {
  double beta;
  std::vector<double> couplings;
  std::vector<double> mean;
  std::vector<double> second;
  std::vector<double> jarzynski_residual;
  double max_pairwise_kolmogorov;
  double max_mean_gap;    // pairwise |a - b| / max(|a|, |b|)
  double max_second_gap;
  double ndp_mean;
  double ndp_second;
  double max_ndp_mean_gap;  // |m - m_ndp| / |m_ndp|
  double max_ndp_second_gap;
  double max_ndp_kolmogorov;
  /// Tonks-Girardeau sentinel against the free-fermion reference.
  std::optional<double> tg_fermion_kolmogorov;
  double equipartition_mean;  // (lambda_i^2 / lambda_f^2 - 1) N / (2 beta)
};

struct ConvergenceReport {
  int n_particles;
  double initial_length;
  double final_length;
  std::vector<ConvergenceRow> rows;
  bool kolmogorov_decreasing;
  bool moment_gaps_decreasing;
};

/// Ring adiabatic expansion for every (C, beta).  Betas are processed in the
/// order given; the monotonicity flags refer to that order.
ConvergenceReport classical_convergence_report(const std::vector<double>& couplings, const std::vector<double>& betas,
                                               const Adiabatic& protocol, int n_particles, double hbar = 1.0,
                                               double tail_tolerance = 1e-10, bool include_tonks_girardeau = true);

/// Free-momentum work of a label set: sum 4 hbar^2 pi^2 I_l^2 (1/lambda_f^2 - 1/lambda_i^2).
double free_momentum_work(const ring::QuantumNumbers& qn, double initial_length, double final_length, double hbar = 1.0);

struct FreeMomentumCheck {
  double exact;
  double approximate;
  double relative_error;
};

/// Exact Bethe work of one state against the free-momentum approximation.
FreeMomentumCheck free_momentum_check(const ring::QuantumNumbers& qn, double initial_length, double final_length,
                                      double coupling, double hbar = 1.0);

}  // namespace llwork::analysis

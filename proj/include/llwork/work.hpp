// SPDX-License-Identifier: Apache-2.0
//
// Two-point-measurement work statistics:
//   P(W) = sum_{i,f} p_i P(f | i) delta(W - (E_f - E_i)),  p_i = e^{-beta E_i} / Z_i.
#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "llwork/box.hpp"
#include "llwork/core.hpp"
#include "llwork/propagate.hpp"
#include "llwork/ring.hpp"

namespace llwork::work {

using linalg::Matrix;
using linalg::Vector;

inline constexpr double kDefaultMergeTolerance = 1e-9;

struct WorkAtom {
  double work;
  double probability;
};

struct WorkDistribution {
  std::vector<WorkAtom> atoms;  // ascending work, merged
  double beta = 0.0;
  Protocol protocol{Adiabatic{1.0, 1.0}};
  /// 1 - sum p: skipped initial weight plus transition probability lost to
  /// the final-space truncation.
  double tail_mass = 0.0;
  /// Bound on the Boltzmann weight of initial states outside the model space
  /// (relative to Z_i).
  double initial_tail_bound = 0.0;
  double log_z_initial = std::numeric_limits<double>::quiet_NaN();
  double log_z_final = std::numeric_limits<double>::quiet_NaN();
  /// sum p e^{-beta W} accumulated per transition from log weights, before
  /// merging.  Set when initial weights can underflow to zero while their
  /// e^{-beta W} factor does not; NaN means "sum the atoms".
  double transition_jarzynski_sum = std::numeric_limits<double>::quiet_NaN();
  std::map<std::string, std::string> metadata;

  double total_probability() const;
  /// sum p e^{-beta W}
  double jarzynski_sum() const;
  /// Z_f / Z_i from the stored log partition functions.
  double partition_ratio() const;
  /// |sum p e^{-beta W} / (Z_f / Z_i) - 1|
  double jarzynski_relative_residual() const;
  /// |sum p e^{-beta W} - Z_f / Z_i|
  double jarzynski_absolute_residual() const;
};

/// Sorts by work and merges atoms closer than merge_tolerance to the first
/// atom of their cluster (probability-weighted position).  tail_mass is set
/// to 1 - sum p.
WorkDistribution make_distribution(std::vector<WorkAtom> raw, double beta, const Protocol& protocol,
                                   double merge_tolerance = kDefaultMergeTolerance);

struct ThermalWeights {
  std::vector<double> probabilities;
  double log_z;
};

/// Normalized Boltzmann weights over a finite spectrum.
ThermalWeights thermal_weights(const std::vector<double>& energies, double beta);
ThermalWeights thermal_weights(const Vector& energies, double beta);

/// Ring adiabatic process: each Bethe state keeps its quantum numbers.
/// Throws PairingError unless both tables hold the same label sets.
WorkDistribution adiabatic_distribution(const ring::SpectrumTable& initial, const ring::SpectrumTable& final_table,
                                        double beta, double merge_tolerance = kDefaultMergeTolerance);

struct TransitionMatrix {
  /// probabilities(r, f) = P(n_f | n_i) for initial state initial_states[r]
  Matrix probabilities;
  std::vector<std::size_t> initial_states;
  Vector initial_energies;  // whole initial model space
  Vector final_energies;    // whole final model space
  /// max_r |1 - sum_f P(f | i_r)|
  double max_row_defect;
  std::map<std::string, std::string> metadata;
};

struct WorkCutoffs {
  double i_max = 0.0;  // ring label cutoff; 0 picks one from tail_tolerance
  double tail_tolerance = 1e-10;
  int box_cutoff = 30;
  int final_cutoff = 0;      // sudden wall; 0 scales box_cutoff by lambda_f / lambda_i
  double weight_cut = 1e-16;  // initial states with smaller thermal weight are skipped
  double merge_tolerance = kDefaultMergeTolerance;
  bool enrich_sudden_wall = true;
  propagate::PropagateOptions propagation;
};

/// Box adiabatic map: index in the final spectrum reached by each listed
/// initial state, following maximal overlap along a geometric width path
/// that is refined until every step has squared overlap above 1/2.
std::vector<std::size_t> track_adiabatic(const ModelSpec& model, int cutoff, double initial_width,
                                         double final_width, const std::vector<std::size_t>& initial_states);

/// Transition matrix of any protocol on the two-particle box.
TransitionMatrix box_transitions(const Protocol& protocol, const ModelSpec& model, double beta,
                                 const WorkCutoffs& cutoffs);

/// Work distribution from a transition matrix and thermal initial weights.
WorkDistribution distribution_from_transitions(const TransitionMatrix& tm, double beta, const Protocol& protocol,
                                               double merge_tolerance = kDefaultMergeTolerance);

/// Dispatch on geometry and protocol.  Ring supports Adiabatic; box
/// supports all four protocol kinds.  The model length is replaced by the
/// protocol's initial length where one is given.
WorkDistribution tpm_distribution(const Protocol& protocol, const ModelSpec& model, double beta,
                                  const WorkCutoffs& cutoffs = {});

/// G(nu) = sum p e^{i nu W}.
std::vector<std::complex<double>> characteristic_function(const WorkDistribution& dist,
                                                          const std::vector<double>& nu);

/// sum p W^n, n in [0, 6].
double moments(const WorkDistribution& dist, int n);
/// sum p |W|^n.
double absolute_moment(const WorkDistribution& dist, int n);

/// Kolmogorov distance with work resolution delta:
///   inf { eps : F_a(w - delta) - eps <= F_b(w) <= F_a(w + delta) + eps for all w }.
/// delta = 0 gives the ordinary sup |F_a - F_b|.
double kolmogorov_distance(const WorkDistribution& a, const WorkDistribution& b, double delta = 0.0);

}  // namespace llwork::work

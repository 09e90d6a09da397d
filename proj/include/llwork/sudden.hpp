// SPDX-License-Identifier: Apache-2.0
//
// Overlaps for instantaneous quenches of the two-particle box: moving the
// wall from lambda_i out to lambda_f, or switching the coupling.
#pragma once

#include "llwork/box.hpp"

namespace llwork::sudden {

using linalg::Matrix;
using linalg::Vector;

/// O(a, c) = <final mode a on [0, lf] | initial mode c on [0, li]>, with the
/// initial mode extended by zero.  Rows a = 1..final_cutoff.
Matrix mode_overlap(int final_cutoff, int initial_cutoff, double li, double lf);

/// K(a, c) = int_0^li u'_a u'_c dx for the same pair of mode families.
Matrix mode_gradient_overlap(int final_cutoff, int initial_cutoff, double li, double lf);

/// int_0^L sin(w1 x) sin(w2 x) sin(w3 x) sin(w4 x) dx.
double four_sine_integral(double w1, double w2, double w3, double w4, double length);

/// <F_ab | I_cd> between symmetric pair bases on the two widths.
Matrix pair_overlap(const box::PairBasis& final_basis, const box::PairBasis& initial_basis, double li, double lf);

struct QuenchSpectrum {
  Vector final_energies;  // ascending
  /// transition(i, f) = |<f | i>|^2 for the supplied initial states.
  Matrix transition;
  std::size_t final_dimension;
};

/// Wall quench lambda_i -> lambda_f >= lambda_i.  The final space is the
/// final pair basis enlarged by the embedded initial states, so each
/// initial state is represented exactly: rows sum to 1 and the mean
/// energy is conserved to rounding.  Throws UnsupportedError for
/// lambda_f < lambda_i.
QuenchSpectrum sudden_wall(const box::BoxSpectrum& initial, const std::vector<std::size_t>& initial_states,
                           int final_cutoff, double final_width);

/// Same quench projected onto the plain final pair basis (no enrichment).
QuenchSpectrum sudden_wall_plain(const box::BoxSpectrum& initial, const std::vector<std::size_t>& initial_states,
                                 int final_cutoff, double final_width);

/// Coupling quench on a fixed width; both spectra share the pair basis so
/// the overlap matrix is orthogonal.
QuenchSpectrum sudden_coupling(const box::BoxSpectrum& initial, const box::BoxSpectrum& final_spectrum,
                               const std::vector<std::size_t>& initial_states);

}  // namespace llwork::sudden

// SPDX-License-Identifier: Apache-2.0
//
// Work distributions of noninteracting particles assembled from analytic
// single-particle spectra and overlaps.
#pragma once

#include "llwork/work.hpp"

namespace llwork::ndp {

enum class Statistics { Distinguishable, Boson, Fermion };
enum class GeometryKind { Ring, Box };

const char* to_string(Statistics s);
Statistics statistics_from_string(const std::string& s);

struct NdpOptions {
  double hbar = 1.0;
  /// Relative Boltzmann weight left out of the initial single-particle sum.
  double tail_tolerance = 1e-12;
  /// Final single-particle cutoff for the sudden wall, as a multiple of the
  /// initial cutoff scaled by lambda_f / lambda_i.
  int final_mode_factor = 2;
  double merge_tolerance = work::kDefaultMergeTolerance;
};

/// Single-particle energies on the ring use labels n in Z (periodic), or
/// n in Z + 1/2 for fermions with even N, which is the sector dual to the
/// hard-core bosons.  Box modes are n = 1, 2, ...
///
/// Supported: Adiabatic on both geometries (any N for distinguishable
/// particles, N <= 2 otherwise) and SuddenWall on the box (N <= 2).
/// Everything else throws UnsupportedError.
work::WorkDistribution ndp_reference(const Protocol& protocol, GeometryKind geometry, double beta, int n_particles,
                                     Statistics statistics, const NdpOptions& options = {});

/// Convolution of two work distributions (independent subsystems).
work::WorkDistribution convolve(const work::WorkDistribution& a, const work::WorkDistribution& b,
                                double merge_tolerance = work::kDefaultMergeTolerance);

}  // namespace llwork::ndp

// SPDX-License-Identifier: Apache-2.0
//
// Two delta-interacting bosons between hard walls at 0 and lambda, solved by
// Galerkin projection on symmetrized products of box modes
//   u_n(x) = sqrt(2/lambda) sin(n pi x / lambda).
#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "llwork/core.hpp"
#include "llwork/linalg.hpp"

namespace llwork::box {

using linalg::Matrix;
using linalg::Vector;

/// Symmetric pair basis S_pq = N_pq (u_p u_q + u_q u_p), 1 <= p <= q <= M,
/// with N_pq = 1/sqrt(2) (p != q) or 1/2 (p == q).
class PairBasis {
 public:
  explicit PairBasis(int cutoff);

  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  const std::pair<int, int>& operator[](std::size_t i) const { return pairs_[i]; }
  const std::vector<std::pair<int, int>>& pairs() const noexcept { return pairs_; }
  double norm(std::size_t i) const { return pairs_[i].first == pairs_[i].second ? 0.5 : M_SQRT1_2; }
  std::size_t index(int p, int q) const;

 private:
  int cutoff_;
  std::vector<std::pair<int, int>> pairs_;
};

/// Integer count in int_0^lambda prod sin(n_i pi x/lambda) dx = (lambda/8) S.
int four_sine_count(int a, int b, int c, int d);

/// int_0^lambda u_a u_b u_c u_d dx in closed form.
double four_mode_integral(int a, int b, int c, int d, double width);

/// <S_pq | delta(x1 - x2) | S_rs>.
double contact_element(int p, int q, int r, int s, double width);

/// Kinetic diagonal hbar^2 pi^2 (p^2 + q^2) on the unit interval.
Vector unit_kinetic(const PairBasis& basis, double hbar = 1.0);
/// Contact matrix on the unit interval.  On width lambda it scales as 1/lambda.
Matrix unit_contact(const PairBasis& basis);

/// H = T / lambda^2 + C V / lambda.  Throws ConfigError for a ring model,
/// N != 2, infinite C or M < 2.
Matrix build_hamiltonian(const ModelSpec& model, const PairBasis& basis);

struct BoxSpectrum {
  ModelSpec model;
  PairBasis basis;
  Vector energies;  // ascending
  Matrix vectors;   // columns over the pair basis
  /// max over the reported eigenpairs of |H v - E v| / |H|.
  double residual;
};

/// Dense symmetric eigendecomposition.  The residual is measured on the
/// lowest `check_count` eigenpairs.
BoxSpectrum diagonalize(const ModelSpec& model, const PairBasis& basis, const Matrix& hamiltonian,
                        std::size_t check_count = 20);

BoxSpectrum solve_box(const ModelSpec& model, int cutoff);

// ----------------------------------------------------------------------------
// Wavefunctions on grids

/// Symmetric single-mode coefficient matrix: phi(x1, x2) = sum_ab Cm_ab u_a(x1) u_b(x2).
Matrix mode_matrix(const PairBasis& basis, const Vector& coeffs);

/// Endpoint-inclusive uniform grid of n points on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// Values u_a(x_g), rows a = 1..M, columns g.
Matrix mode_table(int cutoff, double width, const std::vector<double>& x);

/// phi on the product grid x_g1 x x_g2.
Matrix wavefunction_on_grid(const PairBasis& basis, const Vector& coeffs, double width,
                            const std::vector<double>& x);

/// Pointwise value.
double wavefunction_at(const PairBasis& basis, const Vector& coeffs, double width, double x1, double x2);

/// phi^F = A(x) phi^B at one off-contact point.  Throws ContactError on x1 == x2.
double fermionize(double bosonic_value, double x1, double x2);

/// Fermionized amplitudes on a product grid.  The contact diagonal has no
/// defined sign; it is set to +|phi| there (so densities take the common
/// off-contact limit).
Matrix fermionize_grid(const Matrix& bosonic, const std::vector<double>& x);

struct DensityGrid {
  std::vector<double> axis;  // same axis for both coordinates
  Matrix values;             // values(i, j) at (axis[i], axis[j])
  double spacing;
  /// Trapezoid integral of values over the grid.
  double mass;
};

/// Trapezoid weights on a uniform endpoint-inclusive grid.
double trapezoid_2d(const Matrix& values, double spacing);

/// |phi(x1, x2)|^2 on an endpoint-inclusive grid over [0, lambda]^2.
DensityGrid spatial_density(const PairBasis& basis, const Vector& coeffs, double width,
                            std::size_t points = 256, bool fermionized = false);

/// |phi~(k1, k2)|^2, phi~ = (1/2pi) int phi e^{-i(k1 x1 + k2 x2)}.  The
/// bosonic transform is closed form per mode; the fermionized transform
/// splits the square at the contact line, with the inner integral closed
/// form and the outer one by composite Gauss-Legendre.
DensityGrid momentum_density(const PairBasis& basis, const Vector& coeffs, double width, double k_max,
                             std::size_t points = 256, bool fermionized = false);

/// Momentum density of the free-fermion Slater state of modes p < q.
DensityGrid slater_momentum_density(int p, int q, double width, double k_max, std::size_t points = 256);

/// Trapezoid L1 distance between two densities on the same grid.
double l1_distance(const DensityGrid& a, const DensityGrid& b);

/// (1/sqrt(2 pi)) int_0^lambda u_n(x) e^{-i k x} dx.
std::complex<double> mode_transform(int n, double width, double k);

// ----------------------------------------------------------------------------
// Contact condition

struct CuspReport {
  std::vector<double> positions;  // contact-line samples x1 = x2 = x
  std::vector<double> residuals;  // |jump - (C / 2 hbar^2) phi| * width / max|phi|
  std::vector<double> contact_values;
  double max_residual;
  double max_abs_phi;
  double max_contact;  // max |phi| on the contact line
};

/// Derivative jump across x1 = x2 by second-order one-sided differences of
/// step width / M, compared with (C / 2 hbar^2) phi(x, x).
CuspReport cusp_check(const BoxSpectrum& spectrum, std::size_t state, std::size_t samples = 64);

// ----------------------------------------------------------------------------
// Free fermions (C = inf dual)

struct SlaterPair {
  int p;
  int q;
  double energy;
};

/// All p < q <= M, ascending energy, ties by (p, q).
std::vector<SlaterPair> free_fermion_box_spectrum(double width, double hbar, int cutoff);

/// Slater amplitude (u_p(x1) u_q(x2) - u_q(x1) u_p(x2)) / sqrt(2).
double slater_wavefunction(int p, int q, double width, double x1, double x2);

}  // namespace llwork::box

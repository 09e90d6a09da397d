// SPDX-License-Identifier: Apache-2.0
//
// Thermodynamics of the repulsive gas from the dressed dispersion
//   eps(k) = -mu + hbar^2 k^2
//            - (2C / (pi beta)) int hbar^3 ln(1 + e^{-beta eps(q)}) / (C^2 + hbar^4 (k - q)^2) dq,
//   P = (1 / (2 pi beta)) int ln(1 + e^{-beta eps(k)}) dk,   D = dP/dmu.
// The kernel normalization is kept as written above (its mass is 2 hbar).
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace llwork::eos {

struct EosGrid {
  double k_max;
  std::size_t points;  // odd, symmetric about 0
  double spacing() const { return 2.0 * k_max / static_cast<double>(points - 1); }
};

/// Grid with Gaussian tail e^{-beta (hbar^2 k^2 - max(mu, 0))} < 1e-12 at the
/// edge and a spacing a quarter of min(C / hbar^2, 1 / (hbar sqrt(beta))),
/// divided further by `refine`.
EosGrid auto_grid(double beta, double mu, double coupling, double hbar, int refine = 1);

struct EosSolution {
  std::vector<double> k;
  std::vector<double> epsilon;
  double beta;
  double mu;
  double coupling;
  double hbar;
  int iterations;
  /// sup-norm fixed-point residual on the grid
  double residual;
  double damping;  // 1 = plain iteration
};

/// Fixed-point iteration from eps = -mu + hbar^2 k^2 with trapezoid
/// quadrature.  Retries with damping 1/2, 1/4 before throwing SolverError.
/// C = +inf returns the free dispersion exactly.
EosSolution solve_yang_yang(double beta, double mu, double coupling, double hbar = 1.0,
                            std::optional<EosGrid> grid = std::nullopt, double tol = 1e-13, int max_iterations = 5000);

double pressure(const EosSolution& sol);

struct DensityResult {
  double density;       // Richardson-combined central difference
  double step;          // finest mu step used
  double coarse;        // central difference with step 2 * step
  double fine;          // central difference with step
  double richardson_gap;  // |fine - coarse| / |fine|
};

/// D = dP/dmu by central differences at two steps.  step = 0 picks
/// 1e-3 / beta.
DensityResult density(double beta, double mu, double coupling, double hbar = 1.0, double step = 0.0,
                      std::optional<EosGrid> grid = std::nullopt);

enum class A2Reading { ExponentInK, ExponentInQ };
const char* to_string(A2Reading r);

struct VirialCoefficients {
  std::vector<double> k;
  std::vector<double> a1;
  std::vector<double> a2;
  double b1;
  double b2;
  A2Reading reading;
};

/// a1 = e^{-beta hbar^2 k^2}.  ExponentInQ: a2 = a1(k) (2C/pi) int hbar^3 e^{-beta hbar^2 q^2} / (C^2 + hbar^4 (k-q)^2) dq,
/// the coefficient of z^2 in e^{-beta eps}.  ExponentInK: the literal
/// a2 = -(2C/pi) int hbar^3 e^{-beta hbar^2 k^2} / (C^2 + hbar^4 (k-q)^2) dq = -2 hbar e^{-beta hbar^2 k^2}.
/// b1 = int a1, b2 = int (a2 - a1^2 / 2), all by trapezoid on the grid.
VirialCoefficients fugacity_coefficients(double beta, double coupling, double hbar, A2Reading reading,
                                         std::optional<EosGrid> grid = std::nullopt);

/// Closed form printed alongside the expansion: 2 pi / (sqrt(beta) hbar).
double b1_printed(double beta, double hbar);
/// Gaussian integral sqrt(pi) / (sqrt(beta) hbar).
double b1_gaussian(double beta, double hbar);

struct VirialRatio {
  double density;
  double mu;
  double fugacity;
  double full;          // P beta / D from the full solution
  double expansion;     // 1 - 2 pi D b2 / b1^2
  double printed;       // 1 - b2 sqrt(beta) D
  bool in_regime;       // z < 0.1
  std::string warning;
};

/// Solves D(mu) = target for mu (bracketing root search) and compares the
/// full ratio with the two-term expansions.
VirialRatio virial_ratio(double beta, double coupling, double hbar, double target_density,
                         A2Reading reading = A2Reading::ExponentInQ);

/// Free-fermion pressure and density, (1/2pi beta) int ln(1 + z e^{-beta hbar^2 k^2}) dk
/// and its mu derivative, by adaptive double-exponential quadrature.
double free_fermion_pressure(double beta, double mu, double hbar = 1.0);
double free_fermion_density(double beta, double mu, double hbar = 1.0);

}  // namespace llwork::eos

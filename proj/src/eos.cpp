// SPDX-License-Identifier: Apache-2.0
#include "llwork/eos.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "llwork/core.hpp"

namespace llwork::eos {

namespace {

constexpr double kTailExponent = 27.631021115928547;  // ln(1e12)

// ln(1 + e^{-x}) without overflow
double softplus_neg(double x) { return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += (i == 0 || i + 1 == f.size()) ? 0.5 * f[i] : f[i];
  return s * h;
}

void require_params(double beta, double coupling, double hbar) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("eos: beta must be positive");
  if (!(coupling > 0.0)) throw ConfigError("eos: coupling must be > 0 (or +inf)");
  if (!(hbar > 0.0)) throw ConfigError("eos: hbar must be positive");
}

// Toeplitz trapezoid convolution: out_i = sum_j w_j kern(|i - j|) f_j.
std::vector<double> convolve(const std::vector<double>& kern, const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<double> g(f);
  g.front() *= 0.5;
  g.back() *= 0.5;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += kern[i > j ? i - j : j - i] * g[j];
    out[i] = s;
  }
  return out;
}

// (2C/pi) hbar^3 / (C^2 + hbar^4 d^2) * h on lattice differences
std::vector<double> lorentz_kernel(double coupling, double hbar, const EosGrid& grid) {
  const double h = grid.spacing();
  std::vector<double> kern(grid.points);
  for (std::size_t d = 0; d < grid.points; ++d) {
    const double x = d * h;
    kern[d] = h * (2.0 * coupling / kPi) * hbar * hbar * hbar / (coupling * coupling + std::pow(hbar, 4) * x * x);
  }
  return kern;
}

std::vector<double> grid_points(const EosGrid& grid) {
  std::vector<double> k(grid.points);
  const double h = grid.spacing();
  const auto half = static_cast<long>(grid.points / 2);
  for (std::size_t i = 0; i < grid.points; ++i) k[i] = (static_cast<long>(i) - half) * h;
  return k;
}

}  // namespace

EosGrid auto_grid(double beta, double mu, double coupling, double hbar, int refine) {
  require_params(beta, coupling, hbar);
  const double k_max = std::sqrt(std::max(mu, 0.0) + kTailExponent / beta) / hbar;
  double scale = 1.0 / (hbar * std::sqrt(beta));
  if (std::isfinite(coupling)) scale = std::min(scale, coupling / (hbar * hbar));
  if (mu > 0.0) scale = std::min(scale, kPi / (2.0 * beta * hbar * std::sqrt(mu)));
  const double h = scale / (4.0 * std::max(refine, 1));
  std::size_t half = static_cast<std::size_t>(std::ceil(k_max / h));
  half = std::clamp<std::size_t>(half, 16, 20000);
  return {k_max, 2 * half + 1};
}

EosSolution solve_yang_yang(double beta, double mu, double coupling, double hbar, std::optional<EosGrid> grid_opt,
                            double tol, int max_iterations) {
  require_params(beta, coupling, hbar);
  const EosGrid grid = grid_opt ? *grid_opt : auto_grid(beta, mu, coupling, hbar);
  if (grid.points < 3 || grid.points % 2 == 0) throw ConfigError("eos grid needs an odd number (>= 3) of points");
  EosSolution sol{grid_points(grid), {}, beta, mu, coupling, hbar, 0, 0.0, 1.0};
  const std::size_t n = grid.points;
  std::vector<double> bare(n);
  for (std::size_t i = 0; i < n; ++i) bare[i] = -mu + hbar * hbar * sol.k[i] * sol.k[i];
  if (is_tonks_girardeau(coupling)) {
    sol.epsilon = bare;
    return sol;
  }
  const std::vector<double> kern = lorentz_kernel(coupling, hbar, grid);

  auto rhs = [&](const std::vector<double>& eps) {
    std::vector<double> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = softplus_neg(beta * eps[i]);
    std::vector<double> c = convolve(kern, l);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = bare[i] - c[i] / beta;
    return out;
  };

  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> best;
  for (double damping : {1.0, 0.5, 0.25}) {
    std::vector<double> eps = bare;
    double prev_change = std::numeric_limits<double>::infinity();
    int growth = 0;
    for (int it = 1; it <= max_iterations; ++it) {
      const std::vector<double> next = rhs(eps);
      double change = 0.0, scale = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        change = std::max(change, std::abs(next[i] - eps[i]));
        scale = std::max(scale, std::abs(next[i]));
      }
      for (std::size_t i = 0; i < n; ++i) eps[i] += damping * (next[i] - eps[i]);
      // symmetrize: the grid is symmetric and eps is even
      for (std::size_t i = 0; i < n / 2; ++i) {
        const double m = 0.5 * (eps[i] + eps[n - 1 - i]);
        eps[i] = m;
        eps[n - 1 - i] = m;
      }
      if (change < best_res) {
        best_res = change;
        best = eps;
      }
      if (change <= tol * scale) {
        const std::vector<double> check = rhs(eps);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(check[i] - eps[i]));
        sol.epsilon = std::move(eps);
        sol.iterations = it;
        sol.residual = res;
        sol.damping = damping;
        return sol;
      }
      growth = (change > prev_change) ? growth + 1 : 0;
      if (growth > 20) break;  // oscillating or diverging: retry with damping
      prev_change = change;
    }
  }
  std::ostringstream os;
  os << "solve_yang_yang: no convergence (beta=" << beta << ", mu=" << mu << ", C=" << coupling << ")";
  throw SolverError(os.str(), best, best_res);
}

double pressure(const EosSolution& sol) {
  std::vector<double> l(sol.k.size());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = softplus_neg(sol.beta * sol.epsilon[i]);
  const double h = sol.k.size() > 1 ? sol.k[1] - sol.k[0] : 0.0;
  return trapezoid(l, h) / (2.0 * kPi * sol.beta);
}

DensityResult density(double beta, double mu, double coupling, double hbar, double step,
                      std::optional<EosGrid> grid_opt) {
  if (step <= 0.0) step = 1e-3 / beta;
  const EosGrid grid = grid_opt ? *grid_opt : auto_grid(beta, mu + 2.0 * step, coupling, hbar);
  auto p = [&](double m) { return pressure(solve_yang_yang(beta, m, coupling, hbar, grid)); };
  const double fine = (p(mu + step) - p(mu - step)) / (2.0 * step);
  const double coarse = (p(mu + 2.0 * step) - p(mu - 2.0 * step)) / (4.0 * step);
  const double d = (4.0 * fine - coarse) / 3.0;
  return {d, step, coarse, fine, std::abs(fine - coarse) / std::abs(fine)};
}

const char* to_string(A2Reading r) { return r == A2Reading::ExponentInK ? "k" : "q"; }

VirialCoefficients fugacity_coefficients(double beta, double coupling, double hbar, A2Reading reading,
                                         std::optional<EosGrid> grid_opt) {
  require_params(beta, coupling, hbar);
  const EosGrid grid = grid_opt ? *grid_opt : auto_grid(beta, 0.0, coupling, hbar, 2);
  VirialCoefficients vc;
  vc.reading = reading;
  vc.k = grid_points(grid);
  const std::size_t n = grid.points;
  vc.a1.resize(n);
  for (std::size_t i = 0; i < n; ++i) vc.a1[i] = std::exp(-beta * hbar * hbar * vc.k[i] * vc.k[i]);
  vc.a2.assign(n, 0.0);
  if (reading == A2Reading::ExponentInK) {
    // The Lorentzian integrates to pi / (C hbar^2) over the whole line.
    if (!is_tonks_girardeau(coupling))
      for (std::size_t i = 0; i < n; ++i) vc.a2[i] = -2.0 * hbar * vc.a1[i];
  } else if (!is_tonks_girardeau(coupling)) {
    const std::vector<double> c = convolve(lorentz_kernel(coupling, hbar, grid), vc.a1);
    for (std::size_t i = 0; i < n; ++i) vc.a2[i] = vc.a1[i] * c[i];
  }
  const double h = grid.spacing();
  vc.b1 = trapezoid(vc.a1, h);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) integrand[i] = vc.a2[i] - 0.5 * vc.a1[i] * vc.a1[i];
  vc.b2 = trapezoid(integrand, h);
  return vc;
}

double b1_printed(double beta, double hbar) { return 2.0 * kPi / (std::sqrt(beta) * hbar); }
double b1_gaussian(double beta, double hbar) { return std::sqrt(kPi) / (std::sqrt(beta) * hbar); }

VirialRatio virial_ratio(double beta, double coupling, double hbar, double target_density, A2Reading reading) {
  if (!(target_density > 0.0)) throw ConfigError("virial_ratio: density must be positive");
  const VirialCoefficients vc = fugacity_coefficients(beta, coupling, hbar, reading);
  auto f = [&](double mu) { return density(beta, mu, coupling, hbar).density - target_density; };

  // Ideal-gas starting point, then bracket outward.
  double mu0 = std::log(2.0 * kPi * target_density / vc.b1) / beta;
  double lo = mu0 - 1.0 / beta, hi = mu0 + 1.0 / beta;
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < 60 && flo > 0; ++i) {
    lo -= 2.0 / beta;
    flo = f(lo);
  }
  for (int i = 0; i < 60 && fhi < 0; ++i) {
    hi += 2.0 / beta;
    fhi = f(hi);
  }
  if (flo > 0 || fhi < 0) throw NumericError("virial_ratio: could not bracket the chemical potential");
  std::uintmax_t max_iter = 100;
  const auto root = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                      boost::math::tools::eps_tolerance<double>(45), max_iter);
  const double mu = 0.5 * (root.first + root.second);
  const DensityResult d = density(beta, mu, coupling, hbar);
  const double p = pressure(solve_yang_yang(beta, mu, coupling, hbar, auto_grid(beta, mu, coupling, hbar)));

  VirialRatio vr;
  vr.density = d.density;
  vr.mu = mu;
  vr.fugacity = std::exp(beta * mu);
  vr.full = p * beta / d.density;
  vr.expansion = 1.0 - 2.0 * kPi * d.density * vc.b2 / (vc.b1 * vc.b1);
  vr.printed = 1.0 - vc.b2 * std::sqrt(beta) * d.density;
  vr.in_regime = vr.fugacity < 0.1;
  if (!vr.in_regime) {
    std::ostringstream os;
    os << "fugacity " << vr.fugacity << " >= 0.1: two-term expansion outside its regime";
    vr.warning = os.str();
  }
  return vr;
}

double free_fermion_pressure(double beta, double mu, double hbar) {
  const double z = std::exp(beta * mu);
  boost::math::quadrature::exp_sinh<double> integrator;
  auto g = [&](double k) { return std::log1p(z * std::exp(-beta * hbar * hbar * k * k)); };
  const double half = integrator.integrate(g, 0.0, std::numeric_limits<double>::infinity());
  return 2.0 * half / (2.0 * kPi * beta);
}

double free_fermion_density(double beta, double mu, double hbar) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto g = [&](double k) {
    const double x = beta * (hbar * hbar * k * k - mu);
    return x > 0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
  };
  const double half = integrator.integrate(g, 0.0, std::numeric_limits<double>::infinity());
  return 2.0 * half / (2.0 * kPi);
}

}  // namespace llwork::eos

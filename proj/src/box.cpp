// SPDX-License-Identifier: Apache-2.0
#include "llwork/box.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "llwork/parallel.hpp"

namespace llwork::box {

using cplx = std::complex<double>;
using linalg::CMatrix;

PairBasis::PairBasis(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 2) throw ConfigError("pair basis cutoff M must be >= 2");
  pairs_.reserve(static_cast<std::size_t>(cutoff) * (cutoff + 1) / 2);
  for (int p = 1; p <= cutoff; ++p)
    for (int q = p; q <= cutoff; ++q) pairs_.emplace_back(p, q);
}

std::size_t PairBasis::index(int p, int q) const {
  if (p > q) std::swap(p, q);
  // Rows p' < p contribute (M - p' + 1) entries each.
  const std::size_t before = static_cast<std::size_t>(p - 1) * (2 * cutoff_ - p + 2) / 2;
  return before + static_cast<std::size_t>(q - p);
}

int four_sine_count(int a, int b, int c, int d) {
  auto z = [](int v) { return v == 0 ? 1 : 0; };
  return z(a - b - c + d) + z(a - b + c - d) - z(a - b - c - d) - z(a - b + c + d) - z(a + b - c + d) -
         z(a + b + c - d) + z(a + b - c - d);
}

double four_mode_integral(int a, int b, int c, int d, double width) {
  // (2/lambda)^2 * (lambda/8) * S
  return four_sine_count(a, b, c, d) / (2.0 * width);
}

double contact_element(int p, int q, int r, int s, double width) {
  const double n_pq = (p == q) ? 0.5 : M_SQRT1_2;
  const double n_rs = (r == s) ? 0.5 : M_SQRT1_2;
  return 4.0 * n_pq * n_rs * four_mode_integral(p, q, r, s, width);
}

Vector unit_kinetic(const PairBasis& basis, double hbar) {
  Vector t(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto [p, q] = basis[i];
    t[i] = hbar * hbar * kPi * kPi * (p * p + q * q);
  }
  return t;
}

Matrix unit_contact(const PairBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix v(n, n);
  parallel_for(basis.size(), [&](std::size_t i) {
    const auto [p, q] = basis[i];
    for (std::size_t j = 0; j <= i; ++j) {
      const auto [r, s] = basis[j];
      const double e = contact_element(p, q, r, s, 1.0);
      v(i, j) = e;
      v(j, i) = e;
    }
  });
  return v;
}

namespace {
void require_box_pair(const ModelSpec& model) {
  if (!model.is_box()) throw ConfigError("box solver requires box geometry");
  if (model.n_particles() != 2) throw ConfigError("box solver supports N = 2 only");
  if (model.tonks_girardeau()) throw ConfigError("box Galerkin solver needs finite C; use free_fermion_box_spectrum");
}
}  // namespace

Matrix build_hamiltonian(const ModelSpec& model, const PairBasis& basis) {
  require_box_pair(model);
  const double lambda = model.length();
  Matrix h = (model.coupling() / lambda) * unit_contact(basis);
  h.diagonal() += unit_kinetic(basis, model.hbar()) / (lambda * lambda);
  return h;
}

BoxSpectrum diagonalize(const ModelSpec& model, const PairBasis& basis, const Matrix& hamiltonian,
                        std::size_t check_count) {
  linalg::SymEig eig = linalg::eigh(hamiltonian);
  const double scale = std::max(hamiltonian.lpNorm<Eigen::Infinity>(), 1e-300);
  const auto m = static_cast<Eigen::Index>(std::min<std::size_t>(check_count, basis.size()));
  double res = 0.0;
  if (m > 0) {
    Matrix r = hamiltonian * eig.vectors.leftCols(m) - eig.vectors.leftCols(m) * eig.values.head(m).asDiagonal();
    for (Eigen::Index j = 0; j < m; ++j) res = std::max(res, r.col(j).norm() / scale);
  }
  return {model, basis, std::move(eig.values), std::move(eig.vectors), res};
}

BoxSpectrum solve_box(const ModelSpec& model, int cutoff) {
  PairBasis basis(cutoff);
  return diagonalize(model, basis, build_hamiltonian(model, basis));
}

Matrix mode_matrix(const PairBasis& basis, const Vector& coeffs) {
  const int m = basis.cutoff();
  Matrix cm = Matrix::Zero(m, m);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto [p, q] = basis[i];
    if (p == q) {
      cm(p - 1, p - 1) = coeffs[i];
    } else {
      cm(p - 1, q - 1) = coeffs[i] * M_SQRT1_2;
      cm(q - 1, p - 1) = coeffs[i] * M_SQRT1_2;
    }
  }
  return cm;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = lo;
    return x;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

Matrix mode_table(int cutoff, double width, const std::vector<double>& x) {
  Matrix u(cutoff, static_cast<Eigen::Index>(x.size()));
  const double amp = std::sqrt(2.0 / width);
  for (int a = 1; a <= cutoff; ++a)
    for (std::size_t g = 0; g < x.size(); ++g) u(a - 1, g) = amp * std::sin(a * kPi * x[g] / width);
  return u;
}

Matrix wavefunction_on_grid(const PairBasis& basis, const Vector& coeffs, double width,
                            const std::vector<double>& x) {
  const Matrix u = mode_table(basis.cutoff(), width, x);
  return u.transpose() * mode_matrix(basis, coeffs) * u;
}

double wavefunction_at(const PairBasis& basis, const Vector& coeffs, double width, double x1, double x2) {
  return wavefunction_on_grid(basis, coeffs, width, {x1, x2})(0, 1);
}

double fermionize(double bosonic_value, double x1, double x2) {
  const double x[2] = {x1, x2};
  return duality_sign(x) * bosonic_value;
}

Matrix fermionize_grid(const Matrix& bosonic, const std::vector<double>& x) {
  Matrix f = bosonic;
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = 0; j < f.cols(); ++j)
      f(i, j) = (i == j) ? std::abs(bosonic(i, j)) : fermionize(bosonic(i, j), x[i], x[j]);
  return f;
}

double trapezoid_2d(const Matrix& values, double spacing) {
  const auto n = values.rows(), m = values.cols();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double wj = (j == 0 || j == m - 1) ? 0.5 : 1.0;
      s += wi * wj * values(i, j);
    }
  }
  return s * spacing * spacing;
}

DensityGrid spatial_density(const PairBasis& basis, const Vector& coeffs, double width, std::size_t points,
                            bool fermionized) {
  if (points < 2) throw ConfigError("spatial grid needs at least 2 points");
  std::vector<double> x = uniform_grid(0.0, width, points);
  Matrix phi = wavefunction_on_grid(basis, coeffs, width, x);
  if (fermionized) phi = fermionize_grid(phi, x);
  Matrix rho = phi.array().square().matrix();
  const double h = width / static_cast<double>(points - 1);
  return {std::move(x), rho, h, trapezoid_2d(rho, h)};
}

namespace {

// int_0^x e^{i w y} dy = x e^{i w x/2} sinc(w x/2)
cplx segment_exp(double w, double x) {
  const double half = 0.5 * w * x;
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return x * std::polar(1.0, half) * sinc;
}

// int_0^x u_n(y) e^{-i k y} dy
cplx partial_mode_integral(int n, double width, double k, double x) {
  const double kappa = n * kPi / width;
  const cplx diff = segment_exp(kappa - k, x) - segment_exp(-kappa - k, x);
  return std::sqrt(2.0 / width) * diff / cplx(0.0, 2.0);
}

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

}  // namespace

cplx mode_transform(int n, double width, double k) {
  return kInvSqrt2Pi * partial_mode_integral(n, width, k, width);
}

namespace {

CMatrix transform_table(int cutoff, double width, const std::vector<double>& k) {
  CMatrix t(cutoff, static_cast<Eigen::Index>(k.size()));
  for (int a = 1; a <= cutoff; ++a)
    for (std::size_t g = 0; g < k.size(); ++g) t(a - 1, g) = mode_transform(a, width, k[g]);
  return t;
}

// (1/2pi) int int_{x1 < x2} phi e^{-i(k1 x1 + k2 x2)} for phi = sum Cm_ab u_a u_b.
CMatrix upper_triangle_transform(const Matrix& cm, double width, const std::vector<double>& k) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const int m = static_cast<int>(cm.rows());
  const int panels = 2 * m + static_cast<int>(std::ceil(2.0 * width * (std::abs(k.front()) + std::abs(k.back())) / (2 * kPi))) + 4;
  std::vector<double> nodes, weights;
  const double pw = width / panels;
  const auto& absc = Rule::abscissa();
  const auto& wts = Rule::weights();
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * pw;
    for (std::size_t i = 0; i < absc.size(); ++i) {
      const double signs[2] = {1.0, -1.0};
      for (double sg : signs) {
        if (absc[i] == 0.0 && sg < 0) continue;
        nodes.push_back(mid + sg * 0.5 * pw * absc[i]);
        weights.push_back(0.5 * pw * wts[i]);
      }
    }
  }
  const auto nq = static_cast<Eigen::Index>(nodes.size());
  const auto nk = static_cast<Eigen::Index>(k.size());
  const Matrix u = mode_table(m, width, nodes);  // m x nq
  CMatrix outer(nq, nk);                         // w_q e^{-i k2 x_q}
  for (Eigen::Index q = 0; q < nq; ++q)
    for (Eigen::Index j = 0; j < nk; ++j) outer(q, j) = weights[q] * std::polar(1.0, -k[j] * nodes[q]);

  CMatrix result(nk, nk);
  parallel_for(k.size(), [&](std::size_t i1) {
    CMatrix inner(m, nq);
    for (int a = 1; a <= m; ++a)
      for (Eigen::Index q = 0; q < nq; ++q) inner(a - 1, q) = partial_mode_integral(a, width, k[i1], nodes[q]);
    // g(q) = sum_b u_b(x_q) sum_a Cm_ab F_a(x_q)
    CMatrix h = cm.cast<cplx>() * inner;
    Eigen::VectorXcd g = (u.cast<cplx>().cwiseProduct(h)).colwise().sum().transpose();
    result.row(static_cast<Eigen::Index>(i1)) = (g.transpose() * outer) / (2.0 * kPi);
  });
  return result;
}

DensityGrid finish_momentum(std::vector<double> k, const CMatrix& amp) {
  Matrix rho = amp.cwiseAbs2();
  const double h = k.size() > 1 ? k[1] - k[0] : 1.0;
  const double mass = trapezoid_2d(rho, h);
  return {std::move(k), rho, h, mass};
}

}  // namespace

DensityGrid momentum_density(const PairBasis& basis, const Vector& coeffs, double width, double k_max,
                             std::size_t points, bool fermionized) {
  if (points < 2) throw ConfigError("momentum grid needs at least 2 points");
  std::vector<double> k = uniform_grid(-k_max, k_max, points);
  const Matrix cm = mode_matrix(basis, coeffs);
  const CMatrix t = transform_table(basis.cutoff(), width, k);
  CMatrix full = t.transpose() * cm.cast<cplx>() * t;
  if (!fermionized) return finish_momentum(std::move(k), full);
  CMatrix upper = upper_triangle_transform(cm, width, k);
  return finish_momentum(std::move(k), 2.0 * upper - full);
}

DensityGrid slater_momentum_density(int p, int q, double width, double k_max, std::size_t points) {
  std::vector<double> k = uniform_grid(-k_max, k_max, points);
  const auto n = static_cast<Eigen::Index>(points);
  CMatrix amp(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      amp(i, j) = (mode_transform(p, width, k[i]) * mode_transform(q, width, k[j]) -
                   mode_transform(q, width, k[i]) * mode_transform(p, width, k[j])) *
                  M_SQRT1_2;
  return finish_momentum(std::move(k), amp);
}

double l1_distance(const DensityGrid& a, const DensityGrid& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw ConfigError("l1_distance: grid mismatch");
  return trapezoid_2d((a.values - b.values).cwiseAbs(), a.spacing);
}

CuspReport cusp_check(const BoxSpectrum& spectrum, std::size_t state, std::size_t samples) {
  const double width = spectrum.model.length();
  const double hbar = spectrum.model.hbar();
  const int m = spectrum.basis.cutoff();
  const double step = width / m;
  const Vector coeffs = spectrum.vectors.col(static_cast<Eigen::Index>(state));
  const Matrix cm = mode_matrix(spectrum.basis, coeffs);

  // Samples kept two steps away from the walls.
  std::vector<double> xs = uniform_grid(2.0 * step, width - 2.0 * step, samples);

  // max |phi| estimated on a fine grid
  const std::vector<double> fine = uniform_grid(0.0, width, 4 * m + 1);
  const Matrix uf = mode_table(m, width, fine);
  const double max_abs = (uf.transpose() * cm * uf).cwiseAbs().maxCoeff();

  auto phi = [&](double x1, double x2) {
    const Matrix u = mode_table(m, width, {x1, x2});
    return (u.col(0).transpose() * cm * u.col(1))(0, 0);
  };

  CuspReport rep{xs, {}, {}, 0.0, max_abs, 0.0};
  const double jump_coeff = spectrum.model.coupling() / (2.0 * hbar * hbar);
  for (double x : xs) {
    const double f0 = phi(x, x);
    const double plus = (-3.0 * f0 + 4.0 * phi(x + step, x) - phi(x + 2 * step, x)) / (2.0 * step);
    const double minus = (3.0 * f0 - 4.0 * phi(x - step, x) + phi(x - 2 * step, x)) / (2.0 * step);
    const double r = std::abs((plus - minus) - jump_coeff * f0) * width / max_abs;
    rep.residuals.push_back(r);
    rep.contact_values.push_back(f0);
    rep.max_residual = std::max(rep.max_residual, r);
    rep.max_contact = std::max(rep.max_contact, std::abs(f0));
  }
  return rep;
}

std::vector<SlaterPair> free_fermion_box_spectrum(double width, double hbar, int cutoff) {
  if (cutoff < 2) throw ConfigError("free fermion spectrum needs M >= 2");
  std::vector<SlaterPair> out;
  for (int p = 1; p <= cutoff; ++p)
    for (int q = p + 1; q <= cutoff; ++q)
      out.push_back({p, q, hbar * hbar * kPi * kPi * (p * p + q * q) / (width * width)});
  std::stable_sort(out.begin(), out.end(), [](const SlaterPair& a, const SlaterPair& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return std::pair(a.p, a.q) < std::pair(b.p, b.q);
  });
  return out;
}

double slater_wavefunction(int p, int q, double width, double x1, double x2) {
  const double amp = 2.0 / width;
  auto s = [&](int n, double x) { return std::sin(n * kPi * x / width); };
  return amp * (s(p, x1) * s(q, x2) - s(q, x1) * s(p, x2)) * M_SQRT1_2;
}

}  // namespace llwork::box

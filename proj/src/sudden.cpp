// SPDX-License-Identifier: Apache-2.0
#include "llwork/sudden.hpp"

#include <cmath>

#include "llwork/parallel.hpp"

namespace llwork::sudden {

namespace {

// int_0^L cos(w x) dx
double cos_integral(double w, double length) {
  const double x = w * length;
  if (std::abs(x) < 1e-6) return length * (1.0 - x * x / 6.0);
  return std::sin(x) / w;
}

}  // namespace

Matrix mode_overlap(int final_cutoff, int initial_cutoff, double li, double lf) {
  Matrix o(final_cutoff, initial_cutoff);
  const double pre = 2.0 / std::sqrt(li * lf);
  for (int a = 1; a <= final_cutoff; ++a) {
    const double kf = a * kPi / lf;
    for (int c = 1; c <= initial_cutoff; ++c) {
      const double ki = c * kPi / li;
      o(a - 1, c - 1) = pre * 0.5 * (cos_integral(kf - ki, li) - cos_integral(kf + ki, li));
    }
  }
  return o;
}

Matrix mode_gradient_overlap(int final_cutoff, int initial_cutoff, double li, double lf) {
  Matrix k(final_cutoff, initial_cutoff);
  const double pre = 2.0 / std::sqrt(li * lf);
  for (int a = 1; a <= final_cutoff; ++a) {
    const double kf = a * kPi / lf;
    for (int c = 1; c <= initial_cutoff; ++c) {
      const double ki = c * kPi / li;
      k(a - 1, c - 1) = pre * kf * ki * 0.5 * (cos_integral(kf - ki, li) + cos_integral(kf + ki, li));
    }
  }
  return k;
}

double four_sine_integral(double w1, double w2, double w3, double w4, double length) {
  // sin sin sin sin = (1/8) sum of eight signed cosines
  const double am = w1 - w2, ap = w1 + w2, cm = w3 - w4, cp = w3 + w4;
  const double s = cos_integral(am - cm, length) + cos_integral(am + cm, length) -
                   cos_integral(am - cp, length) - cos_integral(am + cp, length) -
                   cos_integral(ap - cm, length) - cos_integral(ap + cm, length) +
                   cos_integral(ap - cp, length) + cos_integral(ap + cp, length);
  return s / 8.0;
}

Matrix pair_overlap(const box::PairBasis& final_basis, const box::PairBasis& initial_basis, double li, double lf) {
  const Matrix o = mode_overlap(final_basis.cutoff(), initial_basis.cutoff(), li, lf);
  Matrix s(final_basis.size(), initial_basis.size());
  parallel_for(final_basis.size(), [&](std::size_t i) {
    const auto [a, b] = final_basis[i];
    for (std::size_t j = 0; j < initial_basis.size(); ++j) {
      const auto [c, d] = initial_basis[j];
      s(i, j) = 2.0 * final_basis.norm(i) * initial_basis.norm(j) *
                (o(a - 1, c - 1) * o(b - 1, d - 1) + o(a - 1, d - 1) * o(b - 1, c - 1));
    }
  });
  return s;
}

namespace {

void require_expansion(double li, double lf) {
  if (lf < li) throw UnsupportedError("sudden wall compression: initial state is not in the final domain");
}

Matrix selected_vectors(const box::BoxSpectrum& spec, const std::vector<std::size_t>& states) {
  Matrix v(spec.vectors.rows(), static_cast<Eigen::Index>(states.size()));
  for (std::size_t j = 0; j < states.size(); ++j) v.col(j) = spec.vectors.col(static_cast<Eigen::Index>(states[j]));
  return v;
}

}  // namespace

QuenchSpectrum sudden_wall(const box::BoxSpectrum& initial, const std::vector<std::size_t>& initial_states,
                           int final_cutoff, double final_width) {
  const double li = initial.model.length();
  const double lf = final_width;
  require_expansion(li, lf);
  const double hbar = initial.model.hbar();
  const double coupling = initial.model.coupling();
  const box::PairBasis fb(final_cutoff);
  const box::PairBasis& ib = initial.basis;
  const int mf = fb.cutoff(), mi = ib.cutoff();

  const Matrix o = mode_overlap(mf, mi, li, lf);
  const Matrix k = mode_gradient_overlap(mf, mi, li, lf);
  // <F| and <F|H_f| against initial pairs
  Matrix s_pairs(fb.size(), ib.size()), h_pairs(fb.size(), ib.size());
  parallel_for(fb.size(), [&](std::size_t i) {
    const auto [a, b] = fb[i];
    const double ka = a * kPi / lf, kb = b * kPi / lf;
    for (std::size_t j = 0; j < ib.size(); ++j) {
      const auto [c, d] = ib[j];
      const double nn = 2.0 * fb.norm(i) * ib.norm(j);
      const double ov = o(a - 1, c - 1) * o(b - 1, d - 1) + o(a - 1, d - 1) * o(b - 1, c - 1);
      const double kin = k(a - 1, c - 1) * o(b - 1, d - 1) + o(a - 1, c - 1) * k(b - 1, d - 1) +
                         k(a - 1, d - 1) * o(b - 1, c - 1) + o(a - 1, d - 1) * k(b - 1, c - 1);
      const double con = 2.0 * nn * (4.0 / (li * lf)) *
                         four_sine_integral(ka, kb, c * kPi / li, d * kPi / li, li);
      s_pairs(i, j) = nn * ov;
      h_pairs(i, j) = hbar * hbar * nn * kin + coupling * con;
    }
  });

  const Matrix vsel = selected_vectors(initial, initial_states);
  const auto nf = static_cast<Eigen::Index>(fb.size());
  const auto ns = static_cast<Eigen::Index>(initial_states.size());
  const Eigen::Index dim = nf + ns;

  Matrix s = Matrix::Identity(dim, dim);
  Matrix h = Matrix::Zero(dim, dim);
  h.topLeftCorner(nf, nf) = box::build_hamiltonian(initial.model.with_length(lf), fb);
  const Matrix s_fe = s_pairs * vsel;
  const Matrix h_fe = h_pairs * vsel;
  s.topRightCorner(nf, ns) = s_fe;
  s.bottomLeftCorner(ns, nf) = s_fe.transpose();
  h.topRightCorner(nf, ns) = h_fe;
  h.bottomLeftCorner(ns, nf) = h_fe.transpose();
  // Embedded states keep their energy and orthonormality on [0, li].
  const Matrix s_ee = vsel.transpose() * vsel;
  s.bottomRightCorner(ns, ns) = s_ee;
  Matrix h_ee = vsel.transpose() * box::build_hamiltonian(initial.model, ib) * vsel;
  h.bottomRightCorner(ns, ns) = 0.5 * (h_ee + h_ee.transpose());

  // Orthonormal basis: the embedded states first, kept whole, then the final
  // pairs with the embedded span projected out.  Only the complement is
  // canonically truncated, so each initial state stays exactly representable.
  const linalg::SymEig see = linalg::eigh(s_ee);
  const Matrix ee_inv_sqrt =
      see.vectors * see.values.cwiseSqrt().cwiseInverse().asDiagonal() * see.vectors.transpose();
  const Matrix ee_inv = see.vectors * see.values.cwiseInverse().asDiagonal() * see.vectors.transpose();
  Matrix complement(dim, nf);
  complement.topRows(nf).setIdentity();
  complement.bottomRows(ns) = -ee_inv * s_fe.transpose();
  Matrix gram = complement.transpose() * s * complement;
  gram = 0.5 * (gram + gram.transpose()).eval();
  const linalg::SymEig gc = linalg::eigh(gram);
  const double rel_cut = 1e-12;
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < gc.values.size(); ++i)
    if (gc.values[i] > rel_cut * std::max(1.0, gc.values.maxCoeff())) ++keep;
  const Eigen::Index first = gc.values.size() - keep;
  Matrix t = Matrix::Zero(dim, ns + keep);
  t.bottomLeftCorner(ns, ns) = ee_inv_sqrt;
  Matrix x = gc.vectors.rightCols(keep);
  for (Eigen::Index j = 0; j < keep; ++j) x.col(j) /= std::sqrt(gc.values[first + j]);
  t.rightCols(keep) = complement * x;

  Matrix reduced = t.transpose() * h * t;
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  const linalg::SymEig fin = linalg::eigh(reduced);
  const Matrix sy = s * t * fin.vectors;  // rows: basis functions, cols: final states
  QuenchSpectrum out;
  out.final_energies = fin.values;
  out.final_dimension = static_cast<std::size_t>(fin.values.size());
  out.transition = sy.bottomRows(ns).array().square().matrix();
  return out;
}

QuenchSpectrum sudden_wall_plain(const box::BoxSpectrum& initial, const std::vector<std::size_t>& initial_states,
                                 int final_cutoff, double final_width) {
  const double li = initial.model.length();
  require_expansion(li, final_width);
  const box::PairBasis fb(final_cutoff);
  const box::BoxSpectrum fin = box::diagonalize(initial.model.with_length(final_width), fb,
                                                box::build_hamiltonian(initial.model.with_length(final_width), fb));
  const Matrix amp = fin.vectors.transpose() * pair_overlap(fb, initial.basis, li, final_width) *
                     selected_vectors(initial, initial_states);
  return {fin.energies, amp.transpose().array().square().matrix(), fb.size()};
}

QuenchSpectrum sudden_coupling(const box::BoxSpectrum& initial, const box::BoxSpectrum& final_spectrum,
                               const std::vector<std::size_t>& initial_states) {
  if (initial.basis.cutoff() != final_spectrum.basis.cutoff())
    throw ConfigError("sudden_coupling: spectra must share the pair basis");
  if (initial.model.length() != final_spectrum.model.length())
    throw ConfigError("sudden_coupling: widths differ");
  const Matrix amp = selected_vectors(initial, initial_states).transpose() * final_spectrum.vectors;
  return {final_spectrum.energies, amp.array().square().matrix(), final_spectrum.basis.size()};
}

}  // namespace llwork::sudden

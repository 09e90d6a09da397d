// SPDX-License-Identifier: Apache-2.0
#include "llwork/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <string>

#include "llwork/errors.hpp"

namespace llwork::linalg {

// Eigen's own solvers.  The system OpenBLAS LAPACK picked a CPU kernel that
// returned non-orthogonal eigenvectors above n ~ 100 in this environment.
SymEig eigh(const Matrix& a) {
  if (a.cols() != a.rows()) throw NumericError("eigh: matrix not square");
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw NumericError("eigh: no convergence (n=" + std::to_string(a.rows()) + ")");
  return {es.eigenvalues(), es.eigenvectors()};
}

HermEig eigh(const CMatrix& a) {
  if (a.cols() != a.rows()) throw NumericError("eigh: matrix not square");
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  if (es.info() != Eigen::Success) throw NumericError("eigh: no convergence (n=" + std::to_string(a.rows()) + ")");
  return {es.eigenvalues(), es.eigenvectors()};
}

SymEig eigh_generalized(const Matrix& a, const Matrix& s, double rel_cut) {
  SymEig se = eigh(s);
  const double top = se.values.maxCoeff();
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < se.values.size(); ++i)
    if (se.values[i] > rel_cut * top) ++keep;
  const Eigen::Index first = se.values.size() - keep;
  // X = U s^{-1/2} over the retained subspace
  Matrix x = se.vectors.rightCols(keep);
  for (Eigen::Index j = 0; j < keep; ++j) x.col(j) /= std::sqrt(se.values[first + j]);
  Matrix reduced = x.transpose() * a * x;
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  SymEig re = eigh(reduced);
  return {re.values, x * re.vectors};
}

CMatrix expm_hermitian(const CMatrix& h, double scale) {
  HermEig e = eigh(h);
  CVector phase(e.values.size());
  for (Eigen::Index i = 0; i < phase.size(); ++i)
    phase[i] = std::polar(1.0, -scale * e.values[i]);
  return e.vectors * phase.asDiagonal() * e.vectors.adjoint();
}

}  // namespace llwork::linalg

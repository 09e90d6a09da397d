// SPDX-License-Identifier: Apache-2.0
//
// Thin wrappers over LAPACK's divide-and-conquer symmetric/Hermitian
// eigensolvers.  Eigen is used for storage only.
#pragma once

#include <Eigen/Dense>

namespace llwork::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // columns
};

struct HermEig {
  Vector values;
  CMatrix vectors;
};

/// Full eigendecomposition of a real symmetric matrix (lower triangle is
/// read).  Throws NumericError on LAPACK failure.
SymEig eigh(const Matrix& a);

/// Hermitian counterpart.
HermEig eigh(const CMatrix& a);

/// Generalized problem a v = e s v with s symmetric positive semidefinite.
/// Directions of s with eigenvalue below rel_cut * max are dropped
/// (canonical orthogonalization); returned vectors are s-orthonormal and
/// expressed in the original basis.
SymEig eigh_generalized(const Matrix& a, const Matrix& s, double rel_cut = 1e-12);

/// exp(-i h * scale) for Hermitian h, via eigendecomposition.
CMatrix expm_hermitian(const CMatrix& h, double scale);

}  // namespace llwork::linalg

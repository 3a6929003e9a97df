// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "netmimo/rng.hpp"

namespace netmimo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Full singular value decomposition a = u * diag(s) * v^H.
///
/// `v` is always cols x cols, so the trailing columns beyond min(rows, cols)
/// span the right null space. Every column of `v` is phase-normalized so its
/// first nonzero entry is positive real; the matching column of `u` carries
/// the same phase so the reconstruction is unchanged.
struct SvdResult {
  ComplexMatrix u;
  RealVector s;  // descending, min(rows, cols) entries
  ComplexMatrix v;
  Index rank_hint = 0;
};

SvdResult svd(const ComplexMatrix& a);

/// i.i.d. CN(0, 1) entries.
ComplexMatrix complex_gaussian(Index rows, Index cols, RngStream& rng);

/// Haar-distributed m x n matrix with orthonormal columns (Gaussian fill,
/// QR, then R's diagonal forced positive real).
ComplexMatrix haar_orthonormal(Index m, Index n, RngStream& rng);

/// c x dim orthonormal basis of the right null space of `a`, taken from the
/// trailing right singular vectors.
ComplexMatrix null_space_basis(const ComplexMatrix& a, Index dim);

/// c x dim orthonormal basis of the dominant row space of `a` (leading right
/// singular vectors).
ComplexMatrix row_space_basis(const ComplexMatrix& a, Index dim);

double frobenius(const ComplexMatrix& a);
ComplexMatrix hermitian(const ComplexMatrix& a);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// log2 det of a Hermitian positive definite matrix. The caller adds any
/// identity shift.
double log_det_hermitian_psd(const ComplexMatrix& a);

/// ||a^H a - I||_F
double orthonormality_residual(const ComplexMatrix& a);

bool all_finite(const ComplexMatrix& a);

/// Rotates each column so its first entry with modulus above `tol` is
/// positive real. Returns the applied phase factors.
Eigen::VectorXcd normalize_column_phases(ComplexMatrix& a, double tol = 1e-12);

}  // namespace netmimo

// SPDX-License-Identifier: Apache-2.0

#include "netmimo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "netmimo/errors.hpp"

namespace netmimo {

namespace {

std::string dims(const ComplexMatrix& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

}  // namespace

bool all_finite(const ComplexMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    }
  }
  return true;
}

Eigen::VectorXcd normalize_column_phases(ComplexMatrix& a, double tol) {
  Eigen::VectorXcd phases = Eigen::VectorXcd::Ones(a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const double mag = std::abs(a(i, j));
      if (mag > tol) {
        const Complex rot = std::conj(a(i, j) / mag);
        a.col(j) *= rot;
        a(i, j) = Complex(std::abs(a(i, j)), 0.0);
        phases(j) = rot;
        break;
      }
    }
  }
  return phases;
}

SvdResult svd(const ComplexMatrix& a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw DimensionError("svd: empty matrix " + dims(a));
  }
  if (!all_finite(a)) {
    throw NumericalError("svd: non-finite input of size " + dims(a));
  }
  Eigen::JacobiSVD<ComplexMatrix> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);

  SvdResult out;
  out.u = dec.matrixU();
  out.v = dec.matrixV();
  out.s = dec.singularValues();
  if (!all_finite(out.u) || !all_finite(out.v) || !out.s.allFinite()) {
    throw NumericalError("svd: did not converge for " + dims(a) + " matrix");
  }

  const Eigen::VectorXcd phases = normalize_column_phases(out.v);
  const Index k = std::min(a.rows(), a.cols());
  for (Index j = 0; j < k; ++j) out.u.col(j) *= phases(j);

  const double s0 = out.s.size() > 0 ? out.s(0) : 0.0;
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * s0;
  out.rank_hint = 0;
  for (Index i = 0; i < out.s.size(); ++i) {
    if (out.s(i) > tol && out.s(i) > 0.0) ++out.rank_hint;
  }
  return out;
}

ComplexMatrix complex_gaussian(Index rows, Index cols, RngStream& rng) {
  ComplexMatrix g(rows, cols);
  // Row-major fill order keeps the draw sequence independent of storage order.
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

ComplexMatrix haar_orthonormal(Index m, Index n, RngStream& rng) {
  if (n < 1 || m < n) {
    throw DimensionError("haar_orthonormal: need 1 <= n <= m, got m=" + std::to_string(m) +
                         " n=" + std::to_string(n));
  }
  const ComplexMatrix g = complex_gaussian(m, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, n);
  const auto& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix null_space_basis(const ComplexMatrix& a, Index dim) {
  const SvdResult dec = svd(a);
  const Index available = a.cols() - dec.rank_hint;
  if (dim < 1 || available < dim) {
    throw DimensionError("null_space_basis: requested " + std::to_string(dim) +
                         " dimensions but " + dims(a) + " matrix has rank " +
                         std::to_string(dec.rank_hint));
  }
  return dec.v.rightCols(dim);
}

ComplexMatrix row_space_basis(const ComplexMatrix& a, Index dim) {
  if (dim < 1 || dim > a.cols()) {
    throw DimensionError("row_space_basis: dim " + std::to_string(dim) + " for " + dims(a));
  }
  return svd(a).v.leftCols(dim);
}

double frobenius(const ComplexMatrix& a) { return a.norm(); }

ComplexMatrix hermitian(const ComplexMatrix& a) { return a.adjoint(); }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + dims(a) + " times " + dims(b));
  }
  return a * b;
}

double log_det_hermitian_psd(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("log_det_hermitian_psd: non-square " + dims(a));
  }
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("log_det_hermitian_psd: matrix " + dims(a) +
                         " is not positive definite");
  }
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Index i = 0; i < a.rows(); ++i) acc += std::log2(l(i, i).real());
  return 2.0 * acc;
}

double orthonormality_residual(const ComplexMatrix& a) {
  return (a.adjoint() * a - ComplexMatrix::Identity(a.cols(), a.cols())).norm();
}

}  // namespace netmimo

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "netmimo/numerics.hpp"

namespace netmimo {

/// One complex Givens rotation acting on rows (pivot, row):
///   [ cos t            -sin t e^{-i p} ]
///   [ sin t e^{i p}     cos t          ]
struct GivensAngles {
  Index pivot = 0;
  Index row = 0;
  double theta = 0.0;  // [0, pi/2]
  double phi = 0.0;    // [0, 2 pi)
};

/// Sequential Givens parameterization of an m x n orthonormal matrix.
/// Rotations are enumerated column-major: column j, rows j+1..m-1, each
/// zeroing entry (row, j) against the pivot (j, j). The column phases left
/// on the diagonal are dropped, so the parameters describe the subspace.
std::vector<GivensAngles> givens_decompose(const ComplexMatrix& v);

/// Rebuilds an orthonormal m x n matrix spanning the encoded subspace.
ComplexMatrix givens_compose(std::span<const GivensAngles> angles, Index m, Index n);

/// Number of (theta, phi) pairs for an m x n source.
std::size_t givens_pair_count(Index m, Index n);

/// Bits per pair: total pooled evenly, remainder to the earliest pairs, each
/// pair's share split between theta and phi with theta taking the odd bit.
std::vector<std::pair<int, int>> givens_bit_allocation(std::size_t pairs, int total_bits);

struct GivensPairCode {
  Index pivot = 0;
  Index row = 0;
  std::uint32_t theta_index = 0;
  std::uint32_t phi_index = 0;
  int theta_bits = 0;
  int phi_bits = 0;
};

struct GivensCode {
  Index rows = 0;
  Index cols = 0;
  std::vector<GivensPairCode> pairs;

  std::size_t parameter_count() const { return pairs.size(); }
  int total_bits() const;
};

/// Uniform grids: theta over [0, pi/2], phi over [0, 2 pi), midpoint
/// reconstruction.
GivensCode givens_encode(const ComplexMatrix& source, int total_bits);
ComplexMatrix givens_decode(const GivensCode& code);

}  // namespace netmimo

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "netmimo/channel.hpp"
#include "netmimo/numerics.hpp"

namespace netmimo {

struct PrecoderSet {
  std::vector<ComplexMatrix> w;  // per user, (N n_T) x n_R with orthonormal columns
  double power_scalar = 0.0;     // watts per stream
};

/// p = N P_max / (K n_R)
double power_allocation(const SystemConfig& cfg);

/// Block diagonalization: W_k spans the trailing n_R right singular vectors
/// of the stacked CSI of all other users. Throws InfeasibleError naming the
/// user when that null space is smaller than n_R.
PrecoderSet bd_precoders(std::span<const ComplexMatrix> csi, const SystemConfig& cfg);

}  // namespace netmimo

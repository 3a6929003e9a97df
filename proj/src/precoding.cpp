// SPDX-License-Identifier: Apache-2.0

#include "netmimo/precoding.hpp"

#include <string>

#include "netmimo/errors.hpp"

namespace netmimo {

double power_allocation(const SystemConfig& cfg) {
  if (cfg.n_bs < 1 || cfg.n_users < 1 || cfg.n_r < 1) {
    throw ConfigError("power_allocation: counts must be positive");
  }
  return static_cast<double>(cfg.n_bs) * cfg.p_max /
         (static_cast<double>(cfg.n_users) * static_cast<double>(cfg.n_r));
}

PrecoderSet bd_precoders(std::span<const ComplexMatrix> csi, const SystemConfig& cfg) {
  const Index m = cfg.aggregate_antennas();
  const Index n_r = cfg.n_r;
  const std::size_t k_users = csi.size();
  if (k_users == 0) throw DimensionError("bd_precoders: no users");
  if (static_cast<Index>(k_users) * n_r > m) {
    throw InfeasibleError("bd_precoders: " + std::to_string(k_users) + " users with " +
                          std::to_string(n_r) + " streams exceed " + std::to_string(m) +
                          " transmit antennas");
  }
  for (const auto& h : csi) {
    if (h.rows() != n_r || h.cols() != m) throw DimensionError("bd_precoders: CSI shape mismatch");
  }

  PrecoderSet out;
  out.power_scalar = power_allocation(cfg);
  out.w.reserve(k_users);
  if (k_users == 1) {
    out.w.push_back(ComplexMatrix::Identity(m, m).rightCols(n_r));
    return out;
  }
  ComplexMatrix stacked(static_cast<Index>(k_users - 1) * n_r, m);
  for (std::size_t k = 0; k < k_users; ++k) {
    Index row = 0;
    for (std::size_t j = 0; j < k_users; ++j) {
      if (j == k) continue;
      stacked.middleRows(row, n_r) = csi[j];
      row += n_r;
    }
    const SvdResult dec = svd(stacked);
    if (m - dec.rank_hint < n_r) {
      throw InfeasibleError("bd_precoders: null space for user " + std::to_string(k) +
                            " has dimension " + std::to_string(m - dec.rank_hint) + " < " +
                            std::to_string(n_r));
    }
    out.w.push_back(dec.v.rightCols(n_r));
  }
  return out;
}

}  // namespace netmimo

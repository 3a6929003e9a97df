// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netmimo/channel.hpp"
#include "netmimo/codebook.hpp"
#include "netmimo/numerics.hpp"

namespace netmimo {

enum class SchemeTag { PercellExhaustive, PercellIsa, JointCell, Givens };

/// Indices selected by one MS plus the work spent finding them.
struct FeedbackReport {
  std::vector<std::size_t> indices;  // one per cell (a single entry for joint-cell)
  std::uint64_t searched_count = 0;  // aggregate codewords examined
  SchemeTag scheme = SchemeTag::PercellExhaustive;
  double distortion = 0.0;  // squared chordal distance at the returned indices
};

/// BS-side view of one user's quantized channel.
struct QuantizedCsi {
  ComplexMatrix v_hat_w;  // (N n_T) x n_R, orthonormal
  ComplexMatrix h_hat;    // n_R x (N n_T) = v_hat_w^H G_k
};

/// MS-side preprocessing of one user's channel.
struct Decomposition {
  ComplexMatrix h_w;                     // H_k G_k^{-1}
  ComplexMatrix v_w;                     // row-space basis of h_w, (N n_T) x n_R
  std::vector<ComplexMatrix> centroids;  // row-space basis of each n_R x n_T block
};

/// Normalizes H_k by G_k and extracts the quantization source and the
/// per-cell centroids. A block whose large-scale gain is zero (a BS outside
/// the user's active set) is treated as an all-zero block.
Decomposition normalize_and_decompose(const ChannelRealization& r, std::size_t user,
                                      const SystemConfig& cfg);

/// Exhaustive search over the full Cartesian product of the per-cell
/// codebooks. Ties resolve to the lexicographically smallest index tuple.
FeedbackReport search_exhaustive(const ComplexMatrix& v_w, std::span<const Codebook> books);

/// Per cell, the ascending original indices of codewords strictly within
/// chordal distance delta[n] of centroid n. An empty neighborhood falls
/// back to the single nearest codeword.
std::vector<std::vector<std::size_t>> build_subcodebooks(std::span<const ComplexMatrix> centroids,
                                                         std::span<const Codebook> books,
                                                         std::span<const double> delta);

/// Indices selection restricted to the sub-codebooks.
FeedbackReport search_isa(const ComplexMatrix& v_w, std::span<const ComplexMatrix> centroids,
                          std::span<const Codebook> books, std::span<const double> delta);

/// Search over an explicit candidate list per cell; both searches above
/// reduce to this.
FeedbackReport search_candidates(const ComplexMatrix& v_w, std::span<const Codebook> books,
                                 const std::vector<std::vector<std::size_t>>& candidates,
                                 SchemeTag tag);

/// Nearest codeword of a joint-cell codebook, as a report.
FeedbackReport search_jointcell(const ComplexMatrix& v_w, const Codebook& book);

/// Rebuilds V-hat from per-cell indices and denormalizes with G_k.
QuantizedCsi reconstruct(const FeedbackReport& report, std::span<const Codebook> books,
                         const ChannelRealization& r, std::size_t user);

/// h_hat = v_hat_w^H diag(g_diag).
QuantizedCsi denormalize(ComplexMatrix v_hat_w, const RealVector& g_diag);

}  // namespace netmimo

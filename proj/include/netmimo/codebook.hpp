// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "netmimo/channel.hpp"
#include "netmimo/numerics.hpp"

namespace netmimo {

enum class CodebookKind : std::uint32_t { PerCell = 0, JointCell = 1 };

/// 2^bits orthonormal m x n_R codewords. Immutable once built.
class Codebook {
 public:
  Codebook(CodebookKind kind, int bits, std::vector<ComplexMatrix> codewords);

  CodebookKind kind() const { return kind_; }
  int bits() const { return bits_; }
  std::size_t size() const { return codewords_.size(); }
  Index rows() const { return codewords_.front().rows(); }
  Index cols() const { return codewords_.front().cols(); }
  const ComplexMatrix& operator[](std::size_t i) const { return codewords_[i]; }
  const std::vector<ComplexMatrix>& codewords() const { return codewords_; }

 private:
  CodebookKind kind_;
  int bits_;
  std::vector<ComplexMatrix> codewords_;
};

/// (1/sqrt 2) ||V1 V1^H - V2 V2^H||_F. Validates shapes and orthonormality.
double chordal_distance(const ComplexMatrix& v1, const ComplexMatrix& v2);

/// Squared chordal distance via n_R - ||V1^H V2||_F^2, no validation.
double chordal_distance_sq_fast(const ComplexMatrix& v1, const ComplexMatrix& v2);

/// Haar codebook of 2^bits m x n_r codewords.
Codebook random_codebook(CodebookKind kind, Index m, Index n_r, int bits, RngStream& rng);

/// One n_T x n_R codebook per cell with 2^{bits_per_cell[n]} codewords. Cells
/// draw from independent child streams unless cfg.shared_codebooks is set,
/// in which case every cell reuses the first cell's draw (all budgets must
/// then match).
std::vector<Codebook> build_percell_codebooks(const SystemConfig& cfg, RngStream& rng);

/// One (N n_T) x n_R codebook with 2^{B_k} codewords.
Codebook build_jointcell_codebook(const SystemConfig& cfg, RngStream& rng);

/// (1/sqrt N) times the vertical stack of the per-cell parts.
ComplexMatrix aggregate_codeword(std::span<const ComplexMatrix> parts);

/// argmin_J d_c(V_J, source); ties go to the lowest index.
std::size_t joint_quantize(const ComplexMatrix& source, const Codebook& cb);

/// Binary container: four little-endian uint32 (kind, m, n_R, bits) followed
/// by 2^bits codewords, each m x n_R row-major, each entry as two IEEE-754
/// little-endian doubles (real, imaginary).
void save_codebook(const Codebook& cb, std::ostream& out);
Codebook load_codebook(std::istream& in);

}  // namespace netmimo

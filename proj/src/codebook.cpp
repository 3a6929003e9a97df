// SPDX-License-Identifier: Apache-2.0

#include "netmimo/codebook.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "netmimo/errors.hpp"

namespace netmimo {

namespace {

constexpr double kOrthonormalTol = 1e-6;

void require_orthonormal(const ComplexMatrix& v, const char* who) {
  if (orthonormality_residual(v) > kOrthonormalTol) {
    throw DimensionError(std::string(who) + ": input is not orthonormal");
  }
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("load_codebook: truncated stream");
  return value;
}

}  // namespace

Codebook::Codebook(CodebookKind kind, int bits, std::vector<ComplexMatrix> codewords)
    : kind_(kind), bits_(bits), codewords_(std::move(codewords)) {
  if (bits_ < 0 || bits_ > 30) throw DimensionError("codebook: bits out of range");
  if (codewords_.size() != (std::size_t{1} << bits_)) {
    throw DimensionError("codebook: expected 2^" + std::to_string(bits_) + " codewords, got " +
                         std::to_string(codewords_.size()));
  }
  for (const auto& c : codewords_) {
    if (c.rows() != codewords_.front().rows() || c.cols() != codewords_.front().cols()) {
      throw DimensionError("codebook: codewords differ in shape");
    }
  }
}

double chordal_distance(const ComplexMatrix& v1, const ComplexMatrix& v2) {
  if (v1.rows() != v2.rows() || v1.cols() != v2.cols()) {
    throw DimensionError("chordal_distance: shape mismatch");
  }
  require_orthonormal(v1, "chordal_distance");
  require_orthonormal(v2, "chordal_distance");
  return (v1 * v1.adjoint() - v2 * v2.adjoint()).norm() / std::sqrt(2.0);
}

double chordal_distance_sq_fast(const ComplexMatrix& v1, const ComplexMatrix& v2) {
  return std::max(0.0, static_cast<double>(v1.cols()) - (v1.adjoint() * v2).squaredNorm());
}

Codebook random_codebook(CodebookKind kind, Index m, Index n_r, int bits, RngStream& rng) {
  std::vector<ComplexMatrix> words;
  words.reserve(std::size_t{1} << bits);
  for (std::size_t i = 0; i < (std::size_t{1} << bits); ++i) {
    words.push_back(haar_orthonormal(m, n_r, rng));
  }
  return Codebook(kind, bits, std::move(words));
}

std::vector<Codebook> build_percell_codebooks(const SystemConfig& cfg, RngStream& rng) {
  std::vector<Codebook> books;
  books.reserve(static_cast<std::size_t>(cfg.n_bs));
  for (int n = 0; n < cfg.n_bs; ++n) {
    const int bits = cfg.bits_per_cell[static_cast<std::size_t>(n)];
    if (cfg.shared_codebooks && n > 0) {
      if (bits != books.front().bits()) {
        throw ConfigError("shared codebooks need equal bits_per_cell");
      }
      books.push_back(books.front());
      continue;
    }
    RngStream cell_rng = rng.split(static_cast<std::uint64_t>(n));
    books.push_back(random_codebook(CodebookKind::PerCell, cfg.n_t, cfg.n_r, bits, cell_rng));
  }
  return books;
}

Codebook build_jointcell_codebook(const SystemConfig& cfg, RngStream& rng) {
  RngStream joint_rng = rng.split(0x4a4f494e54ULL);
  return random_codebook(CodebookKind::JointCell, cfg.aggregate_antennas(), cfg.n_r,
                         cfg.total_bits(), joint_rng);
}

ComplexMatrix aggregate_codeword(std::span<const ComplexMatrix> parts) {
  if (parts.empty()) throw DimensionError("aggregate_codeword: no parts");
  const Index m = parts.front().rows();
  const Index n = parts.front().cols();
  ComplexMatrix out(m * static_cast<Index>(parts.size()), n);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].rows() != m || parts[i].cols() != n) {
      throw DimensionError("aggregate_codeword: parts differ in shape");
    }
    out.middleRows(static_cast<Index>(i) * m, m) = parts[i];
  }
  out /= std::sqrt(static_cast<double>(parts.size()));
  return out;
}

std::size_t joint_quantize(const ComplexMatrix& source, const Codebook& cb) {
  if (cb.size() == 0) throw DimensionError("joint_quantize: empty codebook");
  if (source.rows() != cb.rows() || source.cols() != cb.cols()) {
    throw DimensionError("joint_quantize: source shape does not match codebook");
  }
  // Minimizing d_c^2 = n_R - ||V_J^H V||_F^2 is maximizing the overlap term.
  std::size_t best = 0;
  double best_overlap = -1.0;
  for (std::size_t j = 0; j < cb.size(); ++j) {
    const double overlap = (cb[j].adjoint() * source).squaredNorm();
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = j;
    }
  }
  return best;
}

void save_codebook(const Codebook& cb, std::ostream& out) {
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cb.kind()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cb.rows()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cb.cols()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cb.bits()));
  for (const auto& w : cb.codewords()) {
    for (Index i = 0; i < w.rows(); ++i) {
      for (Index j = 0; j < w.cols(); ++j) {
        put_le<double>(out, w(i, j).real());
        put_le<double>(out, w(i, j).imag());
      }
    }
  }
  if (!out) throw IoError("save_codebook: write failed");
}

Codebook load_codebook(std::istream& in) {
  const auto kind = get_le<std::uint32_t>(in);
  const auto m = get_le<std::uint32_t>(in);
  const auto n = get_le<std::uint32_t>(in);
  const auto bits = get_le<std::uint32_t>(in);
  if (kind > 1 || m == 0 || n == 0 || n > m || bits > 30) {
    throw IoError("load_codebook: malformed header");
  }
  std::vector<ComplexMatrix> words;
  words.reserve(std::size_t{1} << bits);
  for (std::size_t c = 0; c < (std::size_t{1} << bits); ++c) {
    ComplexMatrix w(m, n);
    for (Index i = 0; i < static_cast<Index>(m); ++i) {
      for (Index j = 0; j < static_cast<Index>(n); ++j) {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        w(i, j) = Complex(re, im);
      }
    }
    words.push_back(std::move(w));
  }
  return Codebook(static_cast<CodebookKind>(kind), static_cast<int>(bits), std::move(words));
}

}  // namespace netmimo

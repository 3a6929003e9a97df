// SPDX-License-Identifier: Apache-2.0

#include "netmimo/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "netmimo/errors.hpp"

namespace netmimo {

Decomposition normalize_and_decompose(const ChannelRealization& r, std::size_t user,
                                      const SystemConfig& cfg) {
  if (user >= r.h.size()) throw DimensionError("normalize_and_decompose: user out of range");
  const ComplexMatrix& h = r.h[user];
  const RealVector& g = r.g_diag[user];
  Decomposition out;
  out.h_w = ComplexMatrix::Zero(h.rows(), h.cols());
  for (Index c = 0; c < h.cols(); ++c) {
    if (g(c) > 0.0) out.h_w.col(c) = h.col(c) / g(c);
  }
  out.v_w = row_space_basis(out.h_w, cfg.n_r);
  out.centroids.reserve(static_cast<std::size_t>(cfg.n_bs));
  for (int n = 0; n < cfg.n_bs; ++n) {
    out.centroids.push_back(row_space_basis(out.h_w.middleCols(n * cfg.n_t, cfg.n_t), cfg.n_r));
  }
  return out;
}

namespace {

// Flattened n_R x n_R overlap matrices V_J^H V_n, as interleaved (re, im).
void write_overlap(const ComplexMatrix& codeword, const ComplexMatrix& block, double* dst) {
  const ComplexMatrix c = codeword.adjoint() * block;
  std::size_t k = 0;
  for (Index j = 0; j < c.cols(); ++j) {
    for (Index i = 0; i < c.rows(); ++i) {
      dst[k++] = c(i, j).real();
      dst[k++] = c(i, j).imag();
    }
  }
}

}  // namespace

FeedbackReport search_candidates(const ComplexMatrix& v_w, std::span<const Codebook> books,
                                 const std::vector<std::vector<std::size_t>>& candidates,
                                 SchemeTag tag) {
  const std::size_t n_cells = books.size();
  if (n_cells == 0 || candidates.size() != n_cells) {
    throw DimensionError("search_candidates: need one candidate list per codebook");
  }
  const Index n_t = books.front().rows();
  const Index n_r = books.front().cols();
  if (v_w.rows() != n_t * static_cast<Index>(n_cells) || v_w.cols() != n_r) {
    throw DimensionError("search_candidates: source shape does not match codebooks");
  }
  for (std::size_t n = 0; n < n_cells; ++n) {
    if (candidates[n].empty()) throw DimensionError("search_candidates: empty candidate list");
    for (std::size_t idx : candidates[n]) {
      if (idx >= books[n].size()) throw DimensionError("search_candidates: index out of range");
    }
  }

  // d_c^2(Vbar, V) = n_R - (1/N) || sum_n V_{J_n}^H V_n ||_F^2, so the search
  // maximizes the norm of a sum of small overlap matrices. The last cell is
  // stored feature-major so the innermost loop runs over codewords.
  const std::size_t dim = static_cast<std::size_t>(2 * n_r * n_r);
  std::vector<std::vector<double>> outer(n_cells - 1);
  for (std::size_t n = 0; n + 1 < n_cells; ++n) {
    const ComplexMatrix block = v_w.middleRows(static_cast<Index>(n) * n_t, n_t);
    outer[n].resize(candidates[n].size() * dim);
    for (std::size_t i = 0; i < candidates[n].size(); ++i) {
      write_overlap(books[n][candidates[n][i]], block, &outer[n][i * dim]);
    }
  }
  const std::size_t last = n_cells - 1;
  const std::size_t n_last = candidates[last].size();
  std::vector<double> inner(dim * n_last);
  std::vector<double> inner_norm(n_last, 0.0);
  {
    const ComplexMatrix block = v_w.middleRows(static_cast<Index>(last) * n_t, n_t);
    std::vector<double> tmp(dim);
    for (std::size_t j = 0; j < n_last; ++j) {
      write_overlap(books[last][candidates[last][j]], block, tmp.data());
      for (std::size_t d = 0; d < dim; ++d) {
        inner[d * n_last + j] = tmp[d];
        inner_norm[j] += tmp[d] * tmp[d];
      }
    }
  }

  std::vector<double> scores(n_last);
  std::vector<std::vector<double>> partial(n_cells, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> pos(n_cells, 0);
  std::vector<std::size_t> best_pos(n_cells, 0);
  double best = -std::numeric_limits<double>::infinity();

  auto scan_last = [&](const std::vector<double>& acc) {
    double acc_sq = 0.0;
    for (std::size_t d = 0; d < dim; ++d) acc_sq += acc[d] * acc[d];
    std::copy(inner_norm.begin(), inner_norm.end(), scores.begin());
    for (std::size_t d = 0; d < dim; ++d) {
      const double a = 2.0 * acc[d];
      const double* col = &inner[d * n_last];
      double* s = scores.data();
      for (std::size_t j = 0; j < n_last; ++j) s[j] += a * col[j];
    }
    double top = scores[0];
    for (std::size_t j = 1; j < n_last; ++j) top = std::max(top, scores[j]);
    if (acc_sq + top > best) {
      best = acc_sq + top;
      for (std::size_t j = 0; j < n_last; ++j) {
        if (scores[j] == top) {
          pos[last] = j;
          break;
        }
      }
      best_pos = pos;
    }
  };

  auto recurse = [&](auto&& self, std::size_t level) -> void {
    if (level == last) {
      scan_last(level == 0 ? partial[0] : partial[level - 1]);
      return;
    }
    const std::vector<double>& prev = level == 0 ? partial[n_cells - 1] : partial[level - 1];
    for (std::size_t i = 0; i < candidates[level].size(); ++i) {
      const double* f = &outer[level][i * dim];
      for (std::size_t d = 0; d < dim; ++d) partial[level][d] = prev[d] + f[d];
      pos[level] = i;
      self(self, level + 1);
    }
  };
  // partial[n_cells - 1] stays zero and seeds the first level.
  std::fill(partial[n_cells - 1].begin(), partial[n_cells - 1].end(), 0.0);
  if (n_cells == 1) {
    scan_last(partial[0]);
  } else {
    recurse(recurse, 0);
  }

  FeedbackReport report;
  report.scheme = tag;
  report.indices.resize(n_cells);
  report.searched_count = 1;
  for (std::size_t n = 0; n < n_cells; ++n) {
    report.indices[n] = candidates[n][best_pos[n]];
    report.searched_count *= candidates[n].size();
  }
  report.distortion =
      std::max(0.0, static_cast<double>(n_r) - best / static_cast<double>(n_cells));
  return report;
}

FeedbackReport search_exhaustive(const ComplexMatrix& v_w, std::span<const Codebook> books) {
  std::vector<std::vector<std::size_t>> all(books.size());
  for (std::size_t n = 0; n < books.size(); ++n) {
    all[n].resize(books[n].size());
    for (std::size_t j = 0; j < books[n].size(); ++j) all[n][j] = j;
  }
  return search_candidates(v_w, books, all, SchemeTag::PercellExhaustive);
}

std::vector<std::vector<std::size_t>> build_subcodebooks(std::span<const ComplexMatrix> centroids,
                                                         std::span<const Codebook> books,
                                                         std::span<const double> delta) {
  if (centroids.size() != books.size() || delta.size() != books.size()) {
    throw DimensionError("build_subcodebooks: need one centroid and one delta per codebook");
  }
  std::vector<std::vector<std::size_t>> subs(books.size());
  for (std::size_t n = 0; n < books.size(); ++n) {
    const double n_r = static_cast<double>(books[n].cols());
    const double radius_sq = delta[n] * delta[n];
    std::size_t nearest = 0;
    double nearest_sq = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < books[n].size(); ++j) {
      const double d_sq =
          std::max(0.0, n_r - (books[n][j].adjoint() * centroids[n]).squaredNorm());
      if (d_sq < radius_sq) subs[n].push_back(j);
      if (d_sq < nearest_sq) {
        nearest_sq = d_sq;
        nearest = j;
      }
    }
    if (subs[n].empty()) subs[n].push_back(nearest);
  }
  return subs;
}

FeedbackReport search_isa(const ComplexMatrix& v_w, std::span<const ComplexMatrix> centroids,
                          std::span<const Codebook> books, std::span<const double> delta) {
  return search_candidates(v_w, books, build_subcodebooks(centroids, books, delta),
                           SchemeTag::PercellIsa);
}

FeedbackReport search_jointcell(const ComplexMatrix& v_w, const Codebook& book) {
  FeedbackReport report;
  report.scheme = SchemeTag::JointCell;
  report.indices = {joint_quantize(v_w, book)};
  report.searched_count = book.size();
  report.distortion = chordal_distance_sq_fast(book[report.indices[0]], v_w);
  return report;
}

QuantizedCsi denormalize(ComplexMatrix v_hat_w, const RealVector& g_diag) {
  if (v_hat_w.rows() != g_diag.size()) throw DimensionError("denormalize: shape mismatch");
  QuantizedCsi out;
  out.h_hat = v_hat_w.adjoint() * g_diag.asDiagonal();
  out.v_hat_w = std::move(v_hat_w);
  return out;
}

QuantizedCsi reconstruct(const FeedbackReport& report, std::span<const Codebook> books,
                         const ChannelRealization& r, std::size_t user) {
  if (report.indices.size() != books.size()) {
    throw DimensionError("reconstruct: report has " + std::to_string(report.indices.size()) +
                         " indices for " + std::to_string(books.size()) + " codebooks");
  }
  std::vector<ComplexMatrix> parts;
  parts.reserve(books.size());
  for (std::size_t n = 0; n < books.size(); ++n) {
    if (report.indices[n] >= books[n].size()) {
      throw DimensionError("reconstruct: index " + std::to_string(report.indices[n]) +
                           " out of range for cell " + std::to_string(n));
    }
    parts.push_back(books[n][report.indices[n]]);
  }
  return denormalize(aggregate_codeword(parts), r.g_diag.at(user));
}

}  // namespace netmimo

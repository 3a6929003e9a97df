// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "netmimo/codebook.hpp"
#include "netmimo/errors.hpp"
#include "netmimo/feedback.hpp"

using namespace netmimo;

namespace {

SystemConfig small_cfg(int n_t, int n_bs, int n_r, int bits) {
  SystemConfig c;
  c.n_t = n_t;
  c.n_bs = n_bs;
  c.n_r = n_r;
  c.n_users = 1;
  c.bits_per_cell.assign(static_cast<std::size_t>(n_bs), bits);
  c.delta.assign(static_cast<std::size_t>(n_bs), 0.9);
  return c;
}

Decomposition gaussian_source(const SystemConfig& cfg, RngStream& rng) {
  ChannelRealization r;
  r.h.push_back(complex_gaussian(cfg.n_r, cfg.aggregate_antennas(), rng));
  r.g_diag.push_back(RealVector::Ones(cfg.aggregate_antennas()));
  return normalize_and_decompose(r, 0, cfg);
}

// Independent oracle: enumerate tuples, assemble the aggregate codeword and
// evaluate the chordal distance from its definition.
std::vector<std::size_t> brute_force(const ComplexMatrix& v, const std::vector<Codebook>& books,
                                     const std::vector<std::vector<std::size_t>>& cand,
                                     double* best_out) {
  std::vector<std::size_t> pos(books.size(), 0);
  std::vector<std::size_t> best_tuple;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<ComplexMatrix> parts;
    std::vector<std::size_t> tuple;
    for (std::size_t n = 0; n < books.size(); ++n) {
      tuple.push_back(cand[n][pos[n]]);
      parts.push_back(books[n][cand[n][pos[n]]]);
    }
    const double d = chordal_distance(aggregate_codeword(parts), v);
    if (d * d < best - 1e-12) {
      best = d * d;
      best_tuple = tuple;
    }
    std::size_t n = books.size();
    while (n > 0) {
      --n;
      if (++pos[n] < cand[n].size()) break;
      pos[n] = 0;
      if (n == 0) {
        *best_out = best;
        return best_tuple;
      }
    }
  }
}

std::vector<std::vector<std::size_t>> all_indices(const std::vector<Codebook>& books) {
  std::vector<std::vector<std::size_t>> out(books.size());
  for (std::size_t n = 0; n < books.size(); ++n) {
    for (std::size_t j = 0; j < books[n].size(); ++j) out[n].push_back(j);
  }
  return out;
}

}  // namespace

TEST(Decompose, IdentityLargeScale) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 4);
  RngStream rng(1);
  ChannelRealization r;
  r.h.push_back(complex_gaussian(2, 12, rng));
  r.g_diag.push_back(RealVector::Ones(12));
  const Decomposition d = normalize_and_decompose(r, 0, cfg);
  EXPECT_TRUE(d.h_w == r.h[0]);
  EXPECT_LE((d.v_w - svd(r.h[0]).v.leftCols(2)).norm(), 1e-14);
}

TEST(Decompose, ProjectorResidual) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 4);
  RngStream rng(2);
  for (int i = 0; i < 100; ++i) {
    ChannelRealization r;
    RealVector g(12);
    for (int n = 0; n < 3; ++n) g.segment(n * 4, 4).setConstant(std::exp(rng.normal() * 3.0));
    const ComplexMatrix hw = complex_gaussian(2, 12, rng);
    r.h.push_back(hw * g.asDiagonal());
    r.g_diag.push_back(g);
    const Decomposition d = normalize_and_decompose(r, 0, cfg);
    EXPECT_LE((d.h_w - hw).norm(), 1e-12 * hw.norm());
    const ComplexMatrix proj = ComplexMatrix::Identity(12, 12) - d.v_w * d.v_w.adjoint();
    EXPECT_LE((d.h_w * proj).norm(), 1e-9 * d.h_w.norm());
    ASSERT_EQ(d.centroids.size(), 3U);
    for (int n = 0; n < 3; ++n) {
      const ComplexMatrix blk = d.h_w.middleCols(n * 4, 4);
      const ComplexMatrix pn = ComplexMatrix::Identity(4, 4) - d.centroids[n] * d.centroids[n].adjoint();
      EXPECT_LE((blk * pn).norm(), 1e-9 * blk.norm());
    }
  }
}

TEST(Decompose, SingleStreamIsConjugateDirection) {
  const SystemConfig cfg = small_cfg(4, 2, 1, 2);
  RngStream rng(3);
  ChannelRealization r;
  r.h.push_back(complex_gaussian(1, 8, rng));
  r.g_diag.push_back(RealVector::Ones(8));
  const Decomposition d = normalize_and_decompose(r, 0, cfg);
  const ComplexMatrix dir = r.h[0].adjoint() / r.h[0].norm();
  EXPECT_NEAR(std::abs((dir.adjoint() * d.v_w)(0, 0)), 1.0, 1e-12);
}

TEST(Decompose, ZeroGainBlockExcluded) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 4);
  RngStream rng(4);
  ChannelRealization r;
  RealVector g = RealVector::Ones(12);
  g.segment(8, 4).setZero();
  ComplexMatrix h = complex_gaussian(2, 12, rng) * g.asDiagonal();
  r.h.push_back(h);
  r.g_diag.push_back(g);
  const Decomposition d = normalize_and_decompose(r, 0, cfg);
  EXPECT_TRUE(all_finite(d.v_w));
  EXPECT_EQ(d.h_w.middleCols(8, 4).norm(), 0.0);
  EXPECT_LE(d.v_w.middleRows(8, 4).norm(), 1e-12);
}

TEST(Exhaustive, PlantedSource) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 3);
  RngStream rng(5);
  const auto books = build_percell_codebooks(cfg, rng);
  const std::vector<ComplexMatrix> parts{books[0][5], books[1][2], books[2][7]};
  const FeedbackReport r = search_exhaustive(aggregate_codeword(parts), books);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{5, 2, 7}));
  EXPECT_NEAR(r.distortion, 0.0, 1e-12);
  EXPECT_EQ(r.searched_count, 512U);
  EXPECT_EQ(r.scheme, SchemeTag::PercellExhaustive);
}

TEST(Exhaustive, SingleCellMatchesJointQuantizer) {
  const SystemConfig cfg = small_cfg(4, 1, 2, 5);
  RngStream rng(6);
  const auto books = build_percell_codebooks(cfg, rng);
  for (int i = 0; i < 200; ++i) {
    const ComplexMatrix v = haar_orthonormal(4, 2, rng);
    EXPECT_EQ(search_exhaustive(v, books).indices[0], joint_quantize(v, books[0]));
  }
}

TEST(Exhaustive, MatchesBruteForce) {
  for (auto [n_bs, bits] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{3, 3}}) {
    const SystemConfig cfg = small_cfg(4, n_bs, 2, bits);
    RngStream rng(7 + n_bs * 10 + bits);
    for (int i = 0; i < 100; ++i) {
      const auto books = build_percell_codebooks(cfg, rng);
      const ComplexMatrix v = haar_orthonormal(cfg.aggregate_antennas(), 2, rng);
      double best = 0.0;
      const auto oracle = brute_force(v, books, all_indices(books), &best);
      const FeedbackReport r = search_exhaustive(v, books);
      EXPECT_EQ(r.indices, oracle);
      EXPECT_NEAR(r.distortion, best, 1e-10);
    }
  }
}

TEST(Exhaustive, TiesGoToLexicographicallySmallest) {
  const SystemConfig cfg = small_cfg(4, 2, 2, 1);
  RngStream rng(8);
  const ComplexMatrix a = haar_orthonormal(4, 2, rng);
  const ComplexMatrix b = haar_orthonormal(4, 2, rng);
  std::vector<Codebook> books;
  books.emplace_back(CodebookKind::PerCell, 1, std::vector<ComplexMatrix>{a, a});
  books.emplace_back(CodebookKind::PerCell, 1, std::vector<ComplexMatrix>{b, b});
  const FeedbackReport r = search_exhaustive(haar_orthonormal(8, 2, rng), books);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 0}));
}

TEST(Subcodebooks, FullRadiusKeepsEverything) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 4);
  RngStream rng(9);
  const auto books = build_percell_codebooks(cfg, rng);
  const std::vector<double> full(3, std::sqrt(2.0));
  for (int i = 0; i < 50; ++i) {
    const Decomposition d = gaussian_source(cfg, rng);
    const auto subs = build_subcodebooks(d.centroids, books, full);
    for (const auto& s : subs) EXPECT_EQ(s.size(), 16U);
  }
}

TEST(Subcodebooks, ZeroRadiusFallsBackToNearest) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 4);
  RngStream rng(10);
  const auto books = build_percell_codebooks(cfg, rng);
  const std::vector<double> zero(3, 0.0);
  for (int i = 0; i < 50; ++i) {
    const Decomposition d = gaussian_source(cfg, rng);
    const auto subs = build_subcodebooks(d.centroids, books, zero);
    for (int n = 0; n < 3; ++n) {
      ASSERT_EQ(subs[n].size(), 1U);
      EXPECT_EQ(subs[n][0], joint_quantize(d.centroids[n], books[n]));
    }
    const FeedbackReport r = search_isa(d.v_w, d.centroids, books, zero);
    EXPECT_EQ(r.searched_count, 1U);
    for (int n = 0; n < 3; ++n) EXPECT_EQ(r.indices[n], subs[n][0]);
  }
}

TEST(Subcodebooks, MembershipMatchesDirectScan) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 4);
  RngStream rng(11);
  const std::vector<double> delta(3, 0.9);
  double members = 0.0;
  double scanned = 0.0;
  for (int i = 0; i < 300; ++i) {
    const auto books = build_percell_codebooks(cfg, rng);
    const Decomposition d = gaussian_source(cfg, rng);
    const auto subs = build_subcodebooks(d.centroids, books, delta);
    for (int n = 0; n < 3; ++n) {
      std::vector<std::size_t> scan;
      for (std::size_t j = 0; j < books[n].size(); ++j) {
        if (chordal_distance(books[n][j], d.centroids[n]) < 0.9) scan.push_back(j);
      }
      if (scan.empty()) {
        EXPECT_EQ(subs[n].size(), 1U);
      } else {
        EXPECT_EQ(subs[n], scan);
      }
      members += static_cast<double>(scan.size());
      scanned += 16.0;
    }
  }
  EXPECT_GT(members / scanned, 0.0);
  EXPECT_LT(members / scanned, 1.0);
}

TEST(Isa, FullRadiusEqualsExhaustive) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 4);
  RngStream rng(12);
  const std::vector<double> full(3, std::sqrt(2.0));
  for (int i = 0; i < 200; ++i) {
    const auto books = build_percell_codebooks(cfg, rng);
    const Decomposition d = gaussian_source(cfg, rng);
    const FeedbackReport ex = search_exhaustive(d.v_w, books);
    const FeedbackReport isa = search_isa(d.v_w, d.centroids, books, full);
    EXPECT_EQ(isa.indices, ex.indices);
    EXPECT_EQ(isa.distortion, ex.distortion);
    EXPECT_EQ(isa.searched_count, 4096U);
    EXPECT_EQ(isa.scheme, SchemeTag::PercellIsa);
  }
}

TEST(Isa, RestrictedSearchMatchesBruteForceOnSubsets) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 3);
  RngStream rng(13);
  const std::vector<double> delta(3, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto books = build_percell_codebooks(cfg, rng);
    const Decomposition d = gaussian_source(cfg, rng);
    const auto subs = build_subcodebooks(d.centroids, books, delta);
    double best = 0.0;
    const auto oracle = brute_force(d.v_w, books, subs, &best);
    const FeedbackReport r = search_isa(d.v_w, d.centroids, books, delta);
    EXPECT_EQ(r.indices, oracle);
    std::uint64_t prod = 1;
    for (const auto& s : subs) prod *= s.size();
    EXPECT_EQ(r.searched_count, prod);
    EXPECT_LE(r.searched_count, 512U);
  }
}

TEST(Isa, DistortionMonotoneInRadius) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 4);
  RngStream rng(14);
  for (int i = 0; i < 100; ++i) {
    const auto books = build_percell_codebooks(cfg, rng);
    const Decomposition d = gaussian_source(cfg, rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double r : {0.0, 0.6, 0.8, 0.9, 1.0, 1.2, std::sqrt(2.0)}) {
      const double dist = search_isa(d.v_w, d.centroids, books, std::vector<double>(3, r)).distortion;
      EXPECT_LE(dist, prev + 1e-12);
      prev = dist;
    }
    EXPECT_NEAR(prev, search_exhaustive(d.v_w, books).distortion, 1e-15);
  }
}

TEST(Reconstruct, DistortionAndDenormalization) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 4);
  RngStream rng(15);
  const auto books = build_percell_codebooks(cfg, rng);
  ChannelRealization r;
  RealVector g(12);
  for (int n = 0; n < 3; ++n) g.segment(n * 4, 4).setConstant(0.1 * (n + 1));
  r.h.push_back(complex_gaussian(2, 12, rng) * g.asDiagonal());
  r.g_diag.push_back(g);
  const Decomposition d = normalize_and_decompose(r, 0, cfg);
  const FeedbackReport rep = search_exhaustive(d.v_w, books);
  const QuantizedCsi q = reconstruct(rep, books, r, 0);
  EXPECT_LE(orthonormality_residual(q.v_hat_w), 1e-10);
  EXPECT_TRUE(q.h_hat == q.v_hat_w.adjoint() * g.asDiagonal());
  const double dc = chordal_distance(q.v_hat_w, d.v_w);
  EXPECT_NEAR(dc * dc, rep.distortion, 1e-10);

  FeedbackReport bad = rep;
  bad.indices[1] = 16;
  EXPECT_THROW(reconstruct(bad, books, r, 0), DimensionError);
}

TEST(Reconstruct, PlantedRoundTrip) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 2);
  RngStream rng(16);
  const auto books = build_percell_codebooks(cfg, rng);
  const std::vector<ComplexMatrix> parts{books[0][1], books[1][3], books[2][0]};
  const ComplexMatrix v = aggregate_codeword(parts);
  ChannelRealization r;
  r.g_diag.push_back(RealVector::Ones(12));
  r.h.push_back(v.adjoint());
  const QuantizedCsi q = reconstruct(search_exhaustive(v, books), books, r, 0);
  EXPECT_NEAR(chordal_distance(q.v_hat_w, v), 0.0, 1e-7);
  EXPECT_TRUE(q.h_hat == q.v_hat_w.adjoint());
}

TEST(JointcellReport, CountsWholeBook) {
  RngStream rng(17);
  const Codebook cb = random_codebook(CodebookKind::JointCell, 12, 2, 6, rng);
  const ComplexMatrix v = haar_orthonormal(12, 2, rng);
  const FeedbackReport r = search_jointcell(v, cb);
  EXPECT_EQ(r.searched_count, 64U);
  EXPECT_EQ(r.indices[0], joint_quantize(v, cb));
  EXPECT_NEAR(r.distortion, chordal_distance_sq_fast(cb[r.indices[0]], v), 0.0);
}

TEST(Search, ShapeErrors) {
  const SystemConfig cfg = small_cfg(4, 3, 2, 2);
  RngStream rng(18);
  const auto books = build_percell_codebooks(cfg, rng);
  EXPECT_THROW(search_exhaustive(haar_orthonormal(8, 2, rng), books), DimensionError);
  std::vector<std::vector<std::size_t>> cand{{0}, {}, {0}};
  EXPECT_THROW(search_candidates(haar_orthonormal(12, 2, rng), books, cand, SchemeTag::PercellIsa),
               DimensionError);
}

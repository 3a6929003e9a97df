// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

#include "netmimo/numerics.hpp"
#include "netmimo/precoding.hpp"
#include "netmimo/rng.hpp"

namespace netmimo {

/// Above this condition number the interference-plus-noise covariance is
/// treated as unusable and the sample is excluded.
inline constexpr double kMaxInterferenceCondition = 1e12;

struct RateSample {
  double r_csit = 0.0;
  double r_lf = 0.0;
  double r_loss = 0.0;
  double distortion = 0.0;
  std::size_t user = 0;
  std::size_t trial = 0;
};

/// log2 det(I + (p / sigma^2) H_k W_k W_k^H H_k^H)
double rate_csit(const ComplexMatrix& h_k, const PrecoderSet& gcsi, std::size_t k,
                 double noise_power);

struct LfRate {
  double rate = 0.0;
  double condition = 1.0;  // of sigma^2 I + CCI
  bool excluded = false;
};

/// Rate of user k when the precoders were designed from quantized CSI, with
/// the residual inter-user interference treated as noise.
LfRate rate_lf(const ComplexMatrix& h_k, const PrecoderSet& lf, std::size_t k,
               double noise_power);

/// Squared chordal distance between the source and its reconstruction.
double distortion_sample(const ComplexMatrix& v_w, const ComplexMatrix& v_hat_w);

struct ConcentrationResult {
  double exceedance = 0.0;      // fraction of draws with any block off by more than epsilon
  double chebyshev_bound = 0.0;  // (N-1) / (N^2 (N n_T + 1) epsilon^2)
  double std_error = 0.0;       // binomial standard error of `exceedance`
  std::size_t samples = 0;
};

/// Draws unit-norm isotropic vectors in C^{N n_T} and measures how often a
/// length-n_T block's squared norm deviates from 1/N by more than epsilon.
ConcentrationResult concentration_check(int n_t, int n_bs, std::size_t samples, double epsilon,
                                        RngStream& rng);

struct MeanCi {
  double mean = 0.0;
  double ci = 0.0;  // 95% normal-approximation half-width
  std::size_t n = 0;
};

MeanCi mean_ci(std::span<const double> xs);

}  // namespace netmimo

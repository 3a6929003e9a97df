// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "netmimo/feedback.hpp"

namespace netmimo {

/// Inputs to the closed-form scaling laws. `rho` and `g_sum` follow the
/// weakest-path normalization (every per-BS gain >= 1, so g_sum >= N).
struct ScalingInputs {
  double rho = 1.0;
  double g_sum = 1.0;
  double b_k = 0.0;
  double epsilon = 1.0;
  int n_t = 4;
  int n_bs = 3;
  int n_r = 2;
  int n_users = 6;
};

struct Lemma2Value {
  double simplified = 0.0;  // n_R 2^{-B/alpha}
  double appendix = 0.0;    // (Gamma(1/alpha)/alpha) beta^{-1/alpha} 2^{-B/alpha}
  double alpha = 0.0;       // n_R (N n_T - n_R)
  double log_beta = 0.0;    // natural log
};

/// Mean squared chordal distortion of a random product codebook with B bits.
Lemma2Value lemma2_distortion(double b_k, int n_t, int n_bs, int n_r);

/// n_R log2(1 + p D (K-1) g_sum / (N sigma^2)) with D the simplified
/// distortion and p the equal per-stream power. Order-wise predictor only.
double theorem1_loss(const ScalingInputs& si);

/// Bits keeping the predicted loss at epsilon, clamped at zero and rounded up
/// to a multiple of N.
int corollary1_bits(const ScalingInputs& si);

struct Corollary2Value {
  double main_text = 0.0;  // n_R B ln2 / ((N n_T - n_R) N n_T)
  double appendix = 0.0;   // B ln2 / ((N n_T - n_R)(K - 1))
};

Corollary2Value corollary2_rate(const ScalingInputs& si);

/// searched_count / 2^B
double relative_complexity(std::uint64_t searched_count, int b_k);
double relative_complexity(const FeedbackReport& report, int b_k);

struct NormalizedGains {
  double rho = 0.0;    // P_max g_min / sigma^2
  double g_sum = 0.0;  // sum_n g_n / g_min
};

/// Rescales per-BS power gains so the weakest one is 1, moving its value into
/// the SNR. Zero gains are ignored.
NormalizedGains normalize_gains(std::span<const double> gains, double p_max, double noise_power);

}  // namespace netmimo

// SPDX-License-Identifier: Apache-2.0

#include "netmimo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netmimo/errors.hpp"

namespace netmimo {

namespace {

double alpha_of(int n_t, int n_bs, int n_r) {
  const int m = n_t * n_bs;
  if (n_r < 1 || n_r >= m) throw DimensionError("lemma2_distortion: need 1 <= n_R < N n_T");
  return static_cast<double>(n_r) * static_cast<double>(m - n_r);
}

}  // namespace

Lemma2Value lemma2_distortion(double b_k, int n_t, int n_bs, int n_r) {
  Lemma2Value out;
  out.alpha = alpha_of(n_t, n_bs, n_r);
  const double a = out.alpha;
  const int m = n_t * n_bs;
  out.simplified = n_r * std::exp2(-b_k / a);
  double lb = -std::lgamma(a + 1.0);
  for (int i = 1; i <= n_r; ++i) {
    lb += std::lgamma(static_cast<double>(m - i) + 1.0) -
          std::lgamma(static_cast<double>(n_r - i) + 1.0);
  }
  out.log_beta = lb;
  out.appendix = std::exp(std::lgamma(1.0 / a) - std::log(a) - lb / a) * std::exp2(-b_k / a);
  return out;
}

double theorem1_loss(const ScalingInputs& si) {
  const double d = lemma2_distortion(si.b_k, si.n_t, si.n_bs, si.n_r).simplified;
  // p / sigma^2 = N rho / (K n_R)
  const double snr_stream = si.n_bs * si.rho / (static_cast<double>(si.n_users) * si.n_r);
  return si.n_r *
         std::log2(1.0 + snr_stream * d * (si.n_users - 1) * si.g_sum / static_cast<double>(si.n_bs));
}

int corollary1_bits(const ScalingInputs& si) {
  if (!(si.epsilon > 0.0)) throw ConfigError("corollary1_bits: epsilon must be positive");
  if (!(si.rho > 0.0) || !(si.g_sum > 0.0)) {
    throw ConfigError("corollary1_bits: rho and g_sum must be positive");
  }
  const double a = alpha_of(si.n_t, si.n_bs, si.n_r);
  const double c = a * std::log2(std::exp2(si.epsilon / si.n_r) - 1.0);
  const double bits = std::max(0.0, a * std::log2(si.rho * si.g_sum) - c);
  const double n = si.n_bs;
  // Guard against 36.000000001 rounding up to 39.
  const double steps = std::ceil(bits / n - 1e-9);
  return static_cast<int>(std::max(0.0, steps) * n);
}

Corollary2Value corollary2_rate(const ScalingInputs& si) {
  const double m = static_cast<double>(si.n_t) * si.n_bs;
  const double free_dims = m - si.n_r;
  Corollary2Value out;
  out.main_text = si.n_r * si.b_k * std::log(2.0) / (free_dims * m);
  out.appendix = si.n_users > 1
                     ? si.b_k * std::log(2.0) / (free_dims * (si.n_users - 1))
                     : std::numeric_limits<double>::infinity();
  return out;
}

double relative_complexity(std::uint64_t searched_count, int b_k) {
  if (b_k < 0 || b_k > 62) throw ConfigError("relative_complexity: bits out of range");
  return static_cast<double>(searched_count) / std::exp2(b_k);
}

double relative_complexity(const FeedbackReport& report, int b_k) {
  return relative_complexity(report.searched_count, b_k);
}

NormalizedGains normalize_gains(std::span<const double> gains, double p_max, double noise_power) {
  double g_min = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (double g : gains) {
    if (g > 0.0) {
      g_min = std::min(g_min, g);
      total += g;
    }
  }
  if (!std::isfinite(g_min)) throw GeometryError("normalize_gains: no positive gain");
  return {p_max * g_min / noise_power, total / g_min};
}

}  // namespace netmimo

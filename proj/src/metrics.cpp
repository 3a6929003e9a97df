// SPDX-License-Identifier: Apache-2.0

#include "netmimo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netmimo/codebook.hpp"
#include "netmimo/errors.hpp"

namespace netmimo {

namespace {

void check_user(const ComplexMatrix& h_k, const PrecoderSet& set, std::size_t k) {
  if (k >= set.w.size()) throw DimensionError("rate: user index out of range");
  if (h_k.cols() != set.w[k].rows()) throw DimensionError("rate: channel/precoder mismatch");
}

}  // namespace

double rate_csit(const ComplexMatrix& h_k, const PrecoderSet& gcsi, std::size_t k,
                 double noise_power) {
  check_user(h_k, gcsi, k);
  const ComplexMatrix hw = h_k * gcsi.w[k];
  ComplexMatrix a = ComplexMatrix::Identity(h_k.rows(), h_k.rows());
  a.noalias() += (gcsi.power_scalar / noise_power) * (hw * hw.adjoint());
  return std::max(0.0, log_det_hermitian_psd(a));
}

LfRate rate_lf(const ComplexMatrix& h_k, const PrecoderSet& lf, std::size_t k,
               double noise_power) {
  check_user(h_k, lf, k);
  const Index n_r = h_k.rows();
  ComplexMatrix noise = noise_power * ComplexMatrix::Identity(n_r, n_r);
  for (std::size_t j = 0; j < lf.w.size(); ++j) {
    if (j == k) continue;
    const ComplexMatrix hw = h_k * lf.w[j];
    noise.noalias() += lf.power_scalar * (hw * hw.adjoint());
  }
  const ComplexMatrix hw = h_k * lf.w[k];
  const ComplexMatrix signal = lf.power_scalar * (hw * hw.adjoint());

  LfRate out;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(noise, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(out.condition <= kMaxInterferenceCondition)) {
    out.excluded = true;
    return out;
  }
  const ComplexMatrix total = noise + signal;
  out.rate = std::max(0.0, log_det_hermitian_psd(total) - log_det_hermitian_psd(noise));
  return out;
}

double distortion_sample(const ComplexMatrix& v_w, const ComplexMatrix& v_hat_w) {
  const double d = chordal_distance(v_w, v_hat_w);
  return std::clamp(d * d, 0.0, static_cast<double>(v_w.cols()));
}

ConcentrationResult concentration_check(int n_t, int n_bs, std::size_t samples, double epsilon,
                                        RngStream& rng) {
  if (n_t < 1 || n_bs < 1 || samples == 0 || !(epsilon > 0.0)) {
    throw ConfigError("concentration_check: need positive n_t, n_bs, samples and epsilon");
  }
  const Index m = static_cast<Index>(n_t) * n_bs;
  const double target = 1.0 / n_bs;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    ComplexMatrix h = complex_gaussian(m, 1, rng);
    h /= h.norm();
    bool off = false;
    for (int n = 0; n < n_bs && !off; ++n) {
      off = std::abs(h.middleRows(static_cast<Index>(n) * n_t, n_t).squaredNorm() - target) >
            epsilon;
    }
    if (off) ++hits;
  }
  ConcentrationResult out;
  out.samples = samples;
  out.exceedance = static_cast<double>(hits) / static_cast<double>(samples);
  out.std_error =
      std::sqrt(out.exceedance * (1.0 - out.exceedance) / static_cast<double>(samples));
  const double nb = n_bs;
  out.chebyshev_bound = (nb - 1.0) / (nb * nb * (static_cast<double>(m) + 1.0) * epsilon * epsilon);
  return out;
}

MeanCi mean_ci(std::span<const double> xs) {
  MeanCi out;
  out.n = xs.size();
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  out.ci = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
  return out;
}

}  // namespace netmimo

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace netmimo {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double value = 0.0;  // headline statistic
  std::string detail;
  double seconds = 0.0;
};

/// Search with full-radius sub-codebooks against exhaustive search at
/// (4,3,2) with 4 bits per cell; pass only if every tuple matches.
CheckResult check_isa_equivalence(std::uint64_t seed, std::size_t instances = 500);

/// Zero-forcing residual of BD precoders built from quantized CSI at (4,3,2,6).
CheckResult check_bd_zero_forcing(std::uint64_t seed, std::size_t instances = 1000);

/// Monte Carlo distortion of exhaustive per-cell quantization at (4,3,2) for
/// B in {8,12,16,20}: log2 slope within 30% of -1/20, monotone means, and the
/// B = 12 mean inside [0.9, 1.7].
CheckResult check_distortion_slope(std::uint64_t seed, std::size_t sources = 2000);

/// Block-norm concentration at N = 3, epsilon = 0.05, n_T in {16, 64, 256}.
CheckResult check_concentration(std::uint64_t seed, std::size_t samples = 20000);

/// Closed-form consistency: bit inversion vs loss predictor, linearity of
/// the rate predictors, exact distortion slope, and the reference bit
/// schedule increments.
std::vector<CheckResult> check_scaling_laws();

/// suite: distortion | concentration | isa-equivalence | scaling | bd | all.
/// Throws ConfigError for an unknown suite.
std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed);

/// suite,check,pass,value,seconds,detail
std::string verify_csv(const std::vector<CheckResult>& results);

}  // namespace netmimo

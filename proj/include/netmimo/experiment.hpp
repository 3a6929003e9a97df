// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netmimo/channel.hpp"

namespace netmimo {

enum class BitMode { Fixed, Corollary1Scaled };

struct ExperimentSpec {
  std::string name = "experiment";
  SystemConfig base;
  std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30, 35};
  // gcsi, percell-exhaustive, percell-isa, jointcell, givens-4, givens-8
  std::vector<std::string> schemes{"gcsi", "percell-exhaustive"};
  std::vector<double> delta_grid;  // percell-isa radii; empty means base.delta
  BitMode bit_mode = BitMode::Fixed;
  double epsilon = 1.0;  // target loss in scaled mode
  std::string output_path;

  // Optional extras.
  int bits_cap = 24;                   // total per-user bits in scaled mode
  std::vector<int> bits_per_bs_grid;  // sweep uniform per-cell budgets (fixed mode)

  void validate() const;
};

struct ResultRow {
  double snr_db = 0.0;
  std::string scheme;
  double rate_mean = 0.0;
  double rate_ci = 0.0;
  double distortion_mean = 0.0;
  double rel_complexity = 0.0;
  std::uint64_t excluded = 0;
  int bits = 0;
  double loss_mean = 0.0;  // GCSI rate minus this scheme's rate, paired per trial
  double loss_ci = 0.0;
  std::size_t trials_used = 0;
};

struct ExperimentResult {
  std::string name;
  std::vector<ResultRow> rows;  // sorted by (snr_db, scheme, bits)
  std::vector<std::uint64_t> realization_hashes;  // one per trial
  std::size_t infeasible = 0;  // trials where some BD instance was infeasible
};

struct RunOptions {
  unsigned workers = 1;
};

/// Per-SNR total bit budget used by the scaled mode: corollary1_bits for a
/// reference user at the interference-free SNR (rho = SNR, g_sum = N),
/// capped at spec.bits_cap.
std::vector<int> scaled_bit_schedule(const ExperimentSpec& spec);

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

std::string to_csv(const ExperimentResult& result);
/// Writes to_csv(result); throws IoError naming the path on failure.
void emit_csv(const ExperimentResult& result, const std::string& path);

inline constexpr const char* kCsvHeader =
    "snr_db,scheme,rate_mean,rate_ci,distortion_mean,rel_complexity,excluded,bits";

}  // namespace netmimo

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netmimo/numerics.hpp"
#include "netmimo/rng.hpp"

namespace netmimo {

/// Network MIMO system (n_T, N, n_R, K) plus propagation, feedback and Monte
/// Carlo parameters. Defaults describe the 3-cell, 4-antenna reference
/// deployment with 4 feedback bits per BS.
struct SystemConfig {
  int n_t = 4;      // antennas per BS
  int n_bs = 3;     // cooperating BSs, N
  int n_r = 2;      // antennas per MS
  int n_users = 6;  // K
  double p_max = 1.0;        // W, per-BS maximum; overwritten by SNR calibration
  double noise_power = 1.0;  // W, sigma^2
  double cell_radius_m = 300.0;
  double min_bs_distance_m = 35.0;
  double shadowing_std_db = 8.0;
  double pathloss_intercept_db = 130.19;
  double pathloss_slope = 37.6;  // dB per decade of km
  std::vector<int> bits_per_cell{4, 4, 4};
  std::vector<double> delta{0.9, 0.9, 0.9};
  int trials = 1000;
  std::uint64_t seed = 1;
  bool shared_codebooks = false;             // one codebook reused for every cell
  bool redraw_codebooks_per_trial = false;  // default: one draw per experiment

  int aggregate_antennas() const { return n_t * n_bs; }
  int total_bits() const;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// Splits `total_bits` over `n_bs` cells, remainder to the earliest cells.
std::vector<int> split_bits(int total_bits, int n_bs);

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(Position a, Position b);

/// Per-user channel state for one drop.
struct ChannelRealization {
  std::vector<ComplexMatrix> h;                 // n_R x (N n_T), aggregate CSI H_k
  std::vector<RealVector> g_diag;               // diagonal of G_k, length N n_T
  std::vector<std::vector<double>> pathloss_lin;  // g_{k,n}
  std::vector<std::vector<double>> shadow_lin;    // s_{k,n}
  std::vector<Position> user_positions;
};

/// BS sites: centers of adjacent flat-top hexagons with circumradius R. The
/// first site is the origin, the rest follow the first ring in angular order
/// starting at 30 degrees, so any three consecutive sites are mutually
/// adjacent.
std::vector<Position> bs_sites(const SystemConfig& cfg);

/// True when `p` lies inside the flat-top hexagon centered at `center`.
bool in_hexagon(Position p, Position center, double circumradius);

/// K positions uniform over the union of the N cells, each at least
/// min_bs_distance_m from every site.
std::vector<Position> drop_users(const SystemConfig& cfg, RngStream& rng);

/// PL(dB) = intercept + slope * log10(d_km).
double path_loss_db(double d_km, const SystemConfig& cfg);

ChannelRealization realize_channel(const SystemConfig& cfg, std::span<const Position> positions,
                                   RngStream& rng);

/// P_max giving `target_edge_snr_db` at a single cell-edge user with no
/// shadowing: P_max * g(R) / sigma^2 = target.
double snr_calibration(const SystemConfig& cfg, double target_edge_snr_db);

/// FNV-1a over the aggregate CSI entries; used to check that every scheme in
/// a trial consumed the same draw.
std::uint64_t realization_hash(const ChannelRealization& r);

}  // namespace netmimo

// SPDX-License-Identifier: Apache-2.0

#include "netmimo/channel.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <numeric>
#include <string>

#include "netmimo/errors.hpp"

namespace netmimo {

int SystemConfig::total_bits() const {
  return std::accumulate(bits_per_cell.begin(), bits_per_cell.end(), 0);
}

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("system config: " + what); };
  if (n_t < 1 || n_bs < 1 || n_r < 1 || n_users < 1) fail("antenna and node counts must be >= 1");
  if (n_r > n_t) fail("n_r must not exceed n_t");
  if (n_users * n_r > n_bs * n_t) fail("K*n_r must not exceed N*n_t");
  if (!(p_max > 0.0) || !(noise_power > 0.0)) fail("p_max and noise_power must be positive");
  if (!(cell_radius_m > 0.0)) fail("cell_radius_m must be positive");
  if (!(min_bs_distance_m >= 0.0) || !(min_bs_distance_m < cell_radius_m)) {
    fail("min_bs_distance_m must lie in [0, cell_radius_m)");
  }
  if (!(shadowing_std_db >= 0.0)) fail("shadowing_std_db must be non-negative");
  if (static_cast<int>(bits_per_cell.size()) != n_bs) fail("bits_per_cell needs one entry per BS");
  for (int b : bits_per_cell) {
    if (b < 0 || b > 24) fail("bits_per_cell entries must lie in [0, 24]");
  }
  if (static_cast<int>(delta.size()) != n_bs) fail("delta needs one entry per BS");
  for (double d : delta) {
    if (!(d >= 0.0) || d > std::sqrt(static_cast<double>(n_r)) + 1e-12) {
      fail("delta entries must lie in [0, sqrt(n_r)]");
    }
  }
  if (trials < 1) fail("trials must be >= 1");
}

std::vector<int> split_bits(int total_bits, int n_bs) {
  std::vector<int> out(static_cast<std::size_t>(n_bs), total_bits / n_bs);
  for (int i = 0; i < total_bits % n_bs; ++i) ++out[static_cast<std::size_t>(i)];
  return out;
}

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<Position> bs_sites(const SystemConfig& cfg) {
  const double spacing = std::sqrt(3.0) * cfg.cell_radius_m;
  std::vector<Position> sites;
  sites.push_back({0.0, 0.0});
  // Ring r holds 6r hexagons; walk each ring side by side.
  for (int ring = 1; static_cast<int>(sites.size()) < cfg.n_bs; ++ring) {
    for (int side = 0; side < 6 && static_cast<int>(sites.size()) < cfg.n_bs; ++side) {
      const double a0 = std::numbers::pi / 6.0 + side * std::numbers::pi / 3.0;
      const double a1 = a0 + std::numbers::pi / 3.0;
      const Position corner{ring * spacing * std::cos(a0), ring * spacing * std::sin(a0)};
      const Position next{ring * spacing * std::cos(a1), ring * spacing * std::sin(a1)};
      for (int step = 0; step < ring && static_cast<int>(sites.size()) < cfg.n_bs; ++step) {
        const double t = static_cast<double>(step) / ring;
        sites.push_back({corner.x + t * (next.x - corner.x), corner.y + t * (next.y - corner.y)});
      }
    }
  }
  return sites;
}

bool in_hexagon(Position p, Position center, double circumradius) {
  const double dx = std::abs(p.x - center.x);
  const double dy = std::abs(p.y - center.y);
  const double half_height = std::sqrt(3.0) / 2.0 * circumradius;
  return dy <= half_height && std::sqrt(3.0) * dx + dy <= std::sqrt(3.0) * circumradius;
}

std::vector<Position> drop_users(const SystemConfig& cfg, RngStream& rng) {
  if (!(cfg.cell_radius_m > cfg.min_bs_distance_m) || cfg.min_bs_distance_m < 0.0) {
    throw GeometryError("drop_users: need cell_radius_m > min_bs_distance_m >= 0");
  }
  constexpr int kMaxAttempts = 10000;
  const auto sites = bs_sites(cfg);
  const double r = cfg.cell_radius_m;
  const double half_height = std::sqrt(3.0) / 2.0 * r;

  std::vector<Position> users;
  users.reserve(static_cast<std::size_t>(cfg.n_users));
  for (int k = 0; k < cfg.n_users; ++k) {
    // Cells have equal area, so a uniform cell pick followed by a uniform
    // point in that cell is uniform over the union.
    const auto cell = static_cast<std::size_t>(rng.uniform() * static_cast<double>(sites.size()));
    const Position c = sites[std::min(cell, sites.size() - 1)];
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Position p{c.x + (2.0 * rng.uniform() - 1.0) * r,
                       c.y + (2.0 * rng.uniform() - 1.0) * half_height};
      if (!in_hexagon(p, c, r)) continue;
      bool clear = true;
      for (const auto& s : sites) {
        if (distance(p, s) < cfg.min_bs_distance_m) {
          clear = false;
          break;
        }
      }
      if (clear) {
        users.push_back(p);
        placed = true;
      }
    }
    if (!placed) {
      throw GeometryError("drop_users: rejection sampling exceeded " +
                          std::to_string(kMaxAttempts) + " attempts");
    }
  }
  return users;
}

double path_loss_db(double d_km, const SystemConfig& cfg) {
  if (!(d_km > 0.0)) throw GeometryError("path_loss_db: distance must be positive");
  return cfg.pathloss_intercept_db + cfg.pathloss_slope * std::log10(d_km);
}

ChannelRealization realize_channel(const SystemConfig& cfg, std::span<const Position> positions,
                                   RngStream& rng) {
  const auto sites = bs_sites(cfg);
  const int n_agg = cfg.aggregate_antennas();
  ChannelRealization out;
  out.user_positions.assign(positions.begin(), positions.end());
  for (const Position& pos : positions) {
    std::vector<double> pl(static_cast<std::size_t>(cfg.n_bs));
    std::vector<double> sh(static_cast<std::size_t>(cfg.n_bs));
    RealVector g(n_agg);
    for (int n = 0; n < cfg.n_bs; ++n) {
      const double d_km = distance(pos, sites[static_cast<std::size_t>(n)]) / 1000.0;
      pl[static_cast<std::size_t>(n)] = std::pow(10.0, -path_loss_db(d_km, cfg) / 10.0);
      sh[static_cast<std::size_t>(n)] = std::pow(10.0, cfg.shadowing_std_db * rng.normal() / 10.0);
      g.segment(n * cfg.n_t, cfg.n_t)
          .setConstant(std::sqrt(pl[static_cast<std::size_t>(n)] * sh[static_cast<std::size_t>(n)]));
    }
    const ComplexMatrix h_w = complex_gaussian(cfg.n_r, n_agg, rng);
    out.h.push_back(h_w * g.asDiagonal());
    out.g_diag.push_back(std::move(g));
    out.pathloss_lin.push_back(std::move(pl));
    out.shadow_lin.push_back(std::move(sh));
  }
  return out;
}

double snr_calibration(const SystemConfig& cfg, double target_edge_snr_db) {
  const double g_edge = std::pow(10.0, -path_loss_db(cfg.cell_radius_m / 1000.0, cfg) / 10.0);
  return std::pow(10.0, target_edge_snr_db / 10.0) * cfg.noise_power / g_edge;
}

std::uint64_t realization_hash(const ChannelRealization& r) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& m : r.h) {
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) {
        const double parts[2] = {m(i, j).real(), m(i, j).imag()};
        mix(parts, sizeof(parts));
      }
    }
  }
  return h;
}

}  // namespace netmimo

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace netmimo {

/// Seeded random stream. Child streams are derived from the key alone, never
/// from the engine state, so stream(seed, i) is the same no matter which
/// other streams were drawn before it or on which thread.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  RngStream split(std::uint64_t stream_id) const;

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  /// CN(0, 1): real and imaginary parts N(0, 1/2).
  std::complex<double> complex_normal();

  std::uint64_t key() const { return key_; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace netmimo

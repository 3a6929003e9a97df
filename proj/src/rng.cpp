// SPDX-License-Identifier: Apache-2.0

#include "netmimo/rng.hpp"

#include <cmath>

namespace netmimo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t derive_key(std::uint64_t parent, std::uint64_t stream_id) {
  return splitmix64(parent ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_(derive_key(splitmix64(seed), stream_id)) {
  std::seed_seq seq{static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)};
  engine_.seed(seq);
}

RngStream RngStream::split(std::uint64_t stream_id) const {
  RngStream child(0);
  child.key_ = derive_key(key_, stream_id);
  std::seed_seq seq{static_cast<std::uint32_t>(child.key_),
                    static_cast<std::uint32_t>(child.key_ >> 32)};
  child.engine_.seed(seq);
  return child;
}

double RngStream::uniform() { return uniform_(engine_); }

double RngStream::normal() { return normal_(engine_); }

std::complex<double> RngStream::complex_normal() {
  static const double scale = 1.0 / std::sqrt(2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {re * scale, im * scale};
}

}  // namespace netmimo

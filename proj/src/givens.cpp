// SPDX-License-Identifier: Apache-2.0

#include "netmimo/givens.hpp"

#include <cmath>
#include <numbers>

#include "netmimo/errors.hpp"

namespace netmimo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

double wrap_two_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a >= kTwoPi ? 0.0 : a;
}

double phase_of(Complex z) { return std::abs(z) > 0.0 ? std::arg(z) : 0.0; }

std::uint32_t quantize_uniform(double value, double span, int bits) {
  const std::uint32_t levels = 1U << bits;
  const double width = span / levels;
  const auto idx = static_cast<std::uint32_t>(std::floor(value / width));
  return std::min(idx, levels - 1);
}

double reconstruct_uniform(std::uint32_t idx, double span, int bits) {
  const double width = span / static_cast<double>(1U << bits);
  return (idx + 0.5) * width;
}

}  // namespace

std::size_t givens_pair_count(Index m, Index n) {
  std::size_t count = 0;
  for (Index j = 0; j < n; ++j) count += static_cast<std::size_t>(m - 1 - j);
  return count;
}

std::vector<GivensAngles> givens_decompose(const ComplexMatrix& v) {
  if (v.cols() > v.rows() || orthonormality_residual(v) > 1e-6) {
    throw DimensionError("givens_decompose: source must be orthonormal with cols <= rows");
  }
  ComplexMatrix x = v;
  std::vector<GivensAngles> out;
  out.reserve(givens_pair_count(v.rows(), v.cols()));
  for (Index j = 0; j < v.cols(); ++j) {
    for (Index i = j + 1; i < v.rows(); ++i) {
      const Complex a = x(j, j);
      const Complex b = x(i, j);
      GivensAngles g;
      g.pivot = j;
      g.row = i;
      g.theta = std::atan2(std::abs(b), std::abs(a));
      g.phi = wrap_two_pi(phase_of(b) - phase_of(a));
      const double c = std::cos(g.theta);
      const double s = std::sin(g.theta);
      const Complex e = std::polar(1.0, g.phi);
      // Apply G^H to rows (j, i).
      const Eigen::RowVectorXcd rj = x.row(j);
      const Eigen::RowVectorXcd ri = x.row(i);
      x.row(j) = c * rj + s * std::conj(e) * ri;
      x.row(i) = -s * e * rj + c * ri;
      out.push_back(g);
    }
  }
  return out;
}

ComplexMatrix givens_compose(std::span<const GivensAngles> angles, Index m, Index n) {
  ComplexMatrix x = ComplexMatrix::Identity(m, n);
  for (auto it = angles.rbegin(); it != angles.rend(); ++it) {
    if (it->pivot >= m || it->row >= m) throw DimensionError("givens_compose: row out of range");
    const double c = std::cos(it->theta);
    const double s = std::sin(it->theta);
    const Complex e = std::polar(1.0, it->phi);
    const Eigen::RowVectorXcd rj = x.row(it->pivot);
    const Eigen::RowVectorXcd ri = x.row(it->row);
    x.row(it->pivot) = c * rj - s * std::conj(e) * ri;
    x.row(it->row) = s * e * rj + c * ri;
  }
  return x;
}

std::vector<std::pair<int, int>> givens_bit_allocation(std::size_t pairs, int total_bits) {
  std::vector<std::pair<int, int>> out;
  if (pairs == 0) return out;
  const int base = total_bits / static_cast<int>(pairs);
  const int rem = total_bits % static_cast<int>(pairs);
  for (std::size_t p = 0; p < pairs; ++p) {
    const int bits = base + (static_cast<int>(p) < rem ? 1 : 0);
    out.emplace_back((bits + 1) / 2, bits / 2);
  }
  return out;
}

int GivensCode::total_bits() const {
  int total = 0;
  for (const auto& p : pairs) total += p.theta_bits + p.phi_bits;
  return total;
}

GivensCode givens_encode(const ComplexMatrix& source, int total_bits) {
  const auto angles = givens_decompose(source);
  const auto alloc = givens_bit_allocation(angles.size(), total_bits);
  GivensCode code;
  code.rows = source.rows();
  code.cols = source.cols();
  code.pairs.reserve(angles.size());
  for (std::size_t p = 0; p < angles.size(); ++p) {
    GivensPairCode pc;
    pc.pivot = angles[p].pivot;
    pc.row = angles[p].row;
    pc.theta_bits = alloc[p].first;
    pc.phi_bits = alloc[p].second;
    pc.theta_index = quantize_uniform(angles[p].theta, kHalfPi, pc.theta_bits);
    pc.phi_index = quantize_uniform(angles[p].phi, kTwoPi, pc.phi_bits);
    code.pairs.push_back(pc);
  }
  return code;
}

ComplexMatrix givens_decode(const GivensCode& code) {
  std::vector<GivensAngles> angles;
  angles.reserve(code.pairs.size());
  for (const auto& pc : code.pairs) {
    angles.push_back({pc.pivot, pc.row, reconstruct_uniform(pc.theta_index, kHalfPi, pc.theta_bits),
                      reconstruct_uniform(pc.phi_index, kTwoPi, pc.phi_bits)});
  }
  return givens_compose(angles, code.rows, code.cols);
}

}  // namespace netmimo

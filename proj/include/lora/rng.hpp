#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>

namespace lora {

/// Counter-based Philox-4x32-10 generator. A (seed, stream) pair selects a
/// reproducible sequence that is independent of every other stream, so
/// parallel batches can draw without coordination and results do not depend
/// on scheduling order.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{0u, 0u, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() {
    if (idx_ == 4) generate_block();
    return block_[idx_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform on (0, 1]; never 0, so log(next_unit()) is finite.
  double next_unit() { return (static_cast<double>(next_u32()) + 1.0) * 0x1p-32; }

  /// One Box-Muller pair of independent standard normals. Always consumes
  /// exactly two uniforms, keeping stream positions schedule-independent.
  std::pair<double, double> next_normal_pair() {
    const double r = std::sqrt(-2.0 * std::log(next_unit()));
    const double t = 2.0 * std::numbers::pi * next_unit();
    return {r * std::cos(t), r * std::sin(t)};
  }

  /// Circularly symmetric complex normal with E|z|^2 = total_variance.
  std::complex<double> next_cnormal(double total_variance) {
    const auto [a, b] = next_normal_pair();
    const double scale = std::sqrt(total_variance / 2.0);
    return {scale * a, scale * b};
  }

 private:
  void generate_block() {
    auto ctr = counter_;
    auto key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    block_ = ctr;
    idx_ = 0;
    // Words 0-1 count blocks within the stream; words 2-3 stay fixed as the
    // stream id, so distinct streams never collide.
    if (++counter_[0] == 0) ++counter_[1];
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int idx_ = 4;
};

}  // namespace lora

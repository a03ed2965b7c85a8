#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pdwave/types.hpp"

namespace pdwave {

/**
 * Counter-based generator: Philox4x32-10.
 *
 * State is (key, counter); the key carries the 64-bit seed, the upper half of
 * the 128-bit counter carries a 64-bit stream id and the lower half the block
 * index. Draws from distinct (seed, stream) pairs are independent, and any
 * (seed, stream) replays identically regardless of draw order elsewhere, so
 * trials can be farmed out to workers without changing results.
 *
 * Gaussians come from Box-Muller over two 53-bit uniforms (pairs cached).
 * Output files identify the generator as "philox4x32-10/boxmuller".
 */
class Philox {
 public:
  static constexpr const char* kAlgorithmId = "philox4x32-10/boxmuller";

  explicit Philox(uint64_t seed, uint64_t stream = 0)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        stream_{static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)} {}

  uint32_t next_u32() {
    if (idx_ == 4) refill();
    return block_[idx_++];
  }

  uint64_t next_u64() {
    const uint64_t lo = next_u32();
    const uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // offset keeps u1 strictly inside (0,1) so the log is finite
    const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  /// Circularly-symmetric complex Gaussian with E|w|^2 = variance.
  cplx next_cgaussian(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = next_gaussian();
    const double im = next_gaussian();
    return cplx(s * re, s * im);
  }

  /// Raw keyed block function, exposed for known-answer tests.
  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = kMul0 * static_cast<uint64_t>(ctr[0]);
      const uint64_t p1 = kMul1 * static_cast<uint64_t>(ctr[2]);
      const std::array<uint32_t, 4> next = {
          static_cast<uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
          static_cast<uint32_t>(p1),
          static_cast<uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
          static_cast<uint32_t>(p0),
      };
      ctr = next;
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

  void refill() {
    block_ = block({static_cast<uint32_t>(block_index_),
                    static_cast<uint32_t>(block_index_ >> 32), stream_[0], stream_[1]},
                   key_);
    ++block_index_;
    idx_ = 0;
  }

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 2> stream_;
  uint64_t block_index_ = 0;
  std::array<uint32_t, 4> block_{};
  int idx_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// count i.i.d. bits, one per value.
inline std::vector<uint8_t> random_bits(std::size_t count, Philox& rng) {
  std::vector<uint8_t> bits(count);
  for (std::size_t i = 0; i < count; ++i) bits[i] = static_cast<uint8_t>(rng.next_u32() & 1u);
  return bits;
}

}  // namespace pdwave

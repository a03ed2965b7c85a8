#pragma once

#include <cstdint>
#include <vector>

#include "pdwave/types.hpp"

namespace pdwave {

/// Unit-magnitude QPSK payload spectrum together with the bits it encodes.
struct InfoSpectrum {
  cvec symbols;               // |c_n| = 1, arg in {+-pi/4, +-3pi/4}
  std::vector<uint8_t> bits;  // 2 bits per symbol, [b0 b1] per subcarrier

  int size() const { return static_cast<int>(symbols.size()); }
};

/**
 * Gray-mapped QPSK, two bits per symbol:
 *   first bit selects the sign of the real part (0 -> +),
 *   second bit selects the sign of the imaginary part (0 -> +).
 * So 00 -> e^{j pi/4}, 10 -> e^{j 3pi/4}, 11 -> e^{-j 3pi/4}, 01 -> e^{-j pi/4}.
 */
inline InfoSpectrum modulate_qpsk(const std::vector<uint8_t>& bits) {
  detail::require(bits.size() % 2 == 0, "modulate_qpsk: bit count must be even");
  const double a = 1.0 / std::sqrt(2.0);
  InfoSpectrum out;
  out.bits = bits;
  out.symbols.resize(bits.size() / 2);
  for (std::size_t i = 0; i < out.symbols.size(); ++i) {
    const double re = bits[2 * i] ? -a : a;
    const double im = bits[2 * i + 1] ? -a : a;
    out.symbols[i] = cplx(re, im);
  }
  return out;
}

/// Per-symbol quadrant decision; ties on an axis resolve to the positive side
/// (bit 0). Exact inverse of modulate_qpsk on noiseless input.
inline std::vector<uint8_t> demodulate_qpsk(const cvec& received) {
  std::vector<uint8_t> bits(2 * received.size());
  for (std::size_t i = 0; i < received.size(); ++i) {
    bits[2 * i] = received[i].real() < 0.0 ? 1 : 0;
    bits[2 * i + 1] = received[i].imag() < 0.0 ? 1 : 0;
  }
  return bits;
}

}  // namespace pdwave

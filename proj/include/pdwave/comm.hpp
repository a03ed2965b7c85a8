#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pdwave/admm.hpp"
#include "pdwave/parallel.hpp"
#include "pdwave/qpsk.hpp"
#include "pdwave/rng.hpp"
#include "pdwave/types.hpp"
#include "pdwave/waveform.hpp"

namespace pdwave {

/// Flat per-symbol channel: complex gain h and total complex noise variance.
struct ChannelSample {
  cplx h = cplx(1.0, 0.0);
  double noise_var = 0.0;
};

/// y_n = h x_n + w_n with w_n ~ CN(0, noise_var).
inline cvec apply_channel(const cvec& x, const ChannelSample& channel, Philox& rng) {
  detail::require(channel.noise_var >= 0.0, "apply_channel: negative noise variance");
  cvec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = channel.h * x[i];
    if (channel.noise_var > 0.0) y[i] += rng.next_cgaussian(channel.noise_var);
  }
  return y;
}

/// One-tap equalizer y/h. h == 0 erases the symbol: all-zero output, flagged.
inline cvec equalize(const cvec& y, cplx h, bool* erased = nullptr) {
  if (erased) *erased = false;
  if (h == cplx(0.0, 0.0)) {
    if (erased) *erased = true;
    return cvec(y.size(), cplx(0.0, 0.0));
  }
  cvec z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = y[i] / h;
  return z;
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Converts Eb/N0 (dB) to the total complex noise variance for unit-energy
/// symbols carrying 2 bits: sigma^2 = 1 / (2 Eb/N0).
inline double noise_var_from_ebn0_db(double ebn0_db) {
  return 1.0 / (2.0 * std::pow(10.0, ebn0_db / 10.0));
}

/**
 * AWGN bit error rate curve
 *   P_e = 2(M-1)/(M log2 M) * Q( sqrt( 6 (Eb/N0) log2 M / (M^2-1) ) ).
 *
 * This is the per-dimension amplitude-modulation expression; with mq = 2 it
 * reduces to Q(sqrt(2 Eb/N0)), the exact Gray-QPSK per-bit error rate.
 */
inline double ber_theory_awgn(double ebn0_db, int mq = 4) {
  detail::require(mq >= 2, "ber_theory_awgn: mq must be >= 2");
  const double g = std::pow(10.0, ebn0_db / 10.0);
  const double log2m = std::log2(static_cast<double>(mq));
  const double coeff = 2.0 * (mq - 1.0) / (mq * log2m);
  return coeff * q_function(std::sqrt(6.0 * g * log2m / (static_cast<double>(mq) * mq - 1.0)));
}

/**
 * Flat-Rayleigh bit error rate curve
 *   P_e = (M-1)/(M log2 M) * (1 - sqrt( a g / (a g + 1) )),  a = 3 log2 M / (M^2-1).
 *
 * With mq = 2 this is the exact Gray-QPSK Rayleigh curve 0.5(1-sqrt(g/(g+1))).
 */
inline double ber_theory_rayleigh(double ebn0_db, int mq = 4) {
  detail::require(mq >= 2, "ber_theory_rayleigh: mq must be >= 2");
  const double g = std::pow(10.0, ebn0_db / 10.0);
  const double log2m = std::log2(static_cast<double>(mq));
  const double a = 3.0 * log2m / (static_cast<double>(mq) * mq - 1.0);
  return (mq - 1.0) / (mq * log2m) * (1.0 - std::sqrt(a * g / (a * g + 1.0)));
}

/// Exact Gray-QPSK reference curves (order-2 instantiations of the above).
inline double qpsk_ber_awgn(double ebn0_db) { return ber_theory_awgn(ebn0_db, 2); }
inline double qpsk_ber_rayleigh(double ebn0_db) { return ber_theory_rayleigh(ebn0_db, 2); }

struct BerPoint {
  double ebn0_db = 0.0;
  double ber = 0.0;
  long long trials = 0;
  long long errors = 0;
};

enum class ChannelKind { awgn, rayleigh };

/// Which spectrum goes on the air for each Monte Carlo trial.
struct BerMethod {
  enum class Kind { plain_ofdm, plpoi, baseline };
  Kind kind = Kind::plain_ofdm;
  SolverConfig solver{};   // plpoi only
  double weight = 0.65;    // baseline only
  int radar_root = 1;      // baseline only
};

namespace detail {

// Stream ids partition the counter space so parallel and serial runs draw the
// same numbers: [purpose:8][point:16][trial:40].
enum StreamPurpose : uint64_t { kStreamBits = 1, kStreamNoise = 2, kStreamFade = 3 };

inline uint64_t make_stream(uint64_t purpose, uint64_t point, uint64_t trial) {
  return (purpose << 56) | ((point & 0xFFFFu) << 40) | (trial & 0xFFFFFFFFFFull);
}

}  // namespace detail

/**
 * Per trial: draw 2N bits, modulate, design the transmit spectrum, pass it
 * through the flat channel, equalize with the known gain, demodulate, count
 * bit errors. One OFDM symbol per trial; Rayleigh draws one CN(0,1) gain per
 * symbol. Trials use disjoint counter streams, so the fan-out order cannot
 * change the result.
 */
inline std::vector<BerPoint> ber_montecarlo(const BerMethod& method, ChannelKind channel,
                                            const std::vector<double>& ebn0_grid_db, int trials,
                                            uint64_t seed, int n_subcarriers) {
  detail::require(trials >= 1, "ber_montecarlo: trials must be >= 1");
  detail::require(n_subcarriers >= 1, "ber_montecarlo: n must be >= 1");
  if (method.kind == BerMethod::Kind::plpoi) method.solver.validate();

  BaselineWeights weights;
  if (method.kind == BerMethod::Kind::baseline) {
    weights.w = method.weight;
    weights.radar_ref = radar_reference(n_subcarriers, method.radar_root);
  }

  std::vector<BerPoint> points;
  points.reserve(ebn0_grid_db.size());
  for (std::size_t p = 0; p < ebn0_grid_db.size(); ++p) {
    const double noise_var = noise_var_from_ebn0_db(ebn0_grid_db[p]);
    std::vector<long long> errors(trials, 0);
    detail::parallel_for(trials, [&](int t) {
      Philox bit_rng(seed, detail::make_stream(detail::kStreamBits, p, t));
      const InfoSpectrum c = modulate_qpsk(random_bits(2 * n_subcarriers, bit_rng));

      cvec x;
      switch (method.kind) {
        case BerMethod::Kind::plain_ofdm:
          x = c.symbols;
          break;
        case BerMethod::Kind::plpoi:
          x = solve(c, method.solver).spectrum.values;
          break;
        case BerMethod::Kind::baseline:
          x = baseline_design(c, weights);
          break;
      }

      ChannelSample ch;
      ch.noise_var = noise_var;
      if (channel == ChannelKind::rayleigh) {
        Philox fade_rng(seed, detail::make_stream(detail::kStreamFade, p, t));
        ch.h = fade_rng.next_cgaussian(1.0);
      }

      Philox noise_rng(seed, detail::make_stream(detail::kStreamNoise, p, t));
      const cvec z = equalize(apply_channel(x, ch, noise_rng), ch.h);
      const std::vector<uint8_t> decided = demodulate_qpsk(z);
      long long e = 0;
      for (std::size_t i = 0; i < decided.size(); ++i) e += decided[i] != c.bits[i];
      errors[t] = e;
    });

    BerPoint pt;
    pt.ebn0_db = ebn0_grid_db[p];
    pt.trials = trials;
    for (long long e : errors) pt.errors += e;
    pt.ber = static_cast<double>(pt.errors) / (2.0 * n_subcarriers * trials);
    points.push_back(pt);
  }
  return points;
}

}  // namespace pdwave

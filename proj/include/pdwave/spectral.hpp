#pragma once

#include <algorithm>
#include <cmath>

#include "pdwave/fft.hpp"
#include "pdwave/types.hpp"

namespace pdwave {

/// Subcarrier count n, oversampling factor l, transform length m = l*n.
struct TransformPlan {
  int n;
  int oversampling;
  int m;

  explicit TransformPlan(int subcarriers, int oversampling_factor = 4)
      : n(subcarriers), oversampling(oversampling_factor), m(subcarriers * oversampling_factor) {
    detail::require(subcarriers >= 1, "TransformPlan: subcarrier count must be >= 1");
    detail::require(oversampling_factor >= 1, "TransformPlan: oversampling must be >= 1");
  }
};

/**
 * Oversampled time-domain synthesis s_m = sum_{n=0}^{N-1} x_n e^{j2pi mn/M}.
 *
 * The inverse transform is unnormalized (unit-magnitude kernel), so
 * ||s||^2 = M ||x||^2. Computed as an M-point inverse FFT of the
 * zero-padded spectrum, never as a dense matrix product.
 */
inline cvec synthesize_time(const cvec& x, const TransformPlan& plan) {
  detail::require(static_cast<int>(x.size()) == plan.n, "synthesize_time: length != plan.n");
  cvec s(plan.m, cplx(0.0, 0.0));
  std::copy(x.begin(), x.end(), s.begin());
  fft::backward_inplace(s);
  return s;
}

/**
 * Frequency-domain analysis b_n = (1/M) sum_m g_m e^{-j2pi mn/M}, truncated to
 * the first N bins. Inverse of synthesize_time on its range:
 * analyze_freq(synthesize_time(x)) == x.
 */
inline cvec analyze_freq(const cvec& g, const TransformPlan& plan) {
  detail::require(static_cast<int>(g.size()) == plan.m, "analyze_freq: length != plan.m");
  cvec b = g;
  fft::forward_inplace(b);
  b.resize(plan.n);
  const double scale = 1.0 / plan.m;
  for (cplx& v : b) v *= scale;
  return b;
}

/// Wraps an angle to the representative in (-pi, pi].
inline double wrap_phase(double phi) {
  detail::require_domain(std::isfinite(phi), "wrap_phase: non-finite input");
  double w = phi - kTwoPi * std::floor((phi + kPi) / kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  if (w > kPi) w -= kTwoPi;
  return w;
}

/// Peak-to-average power ratio ||s||_inf^2 / ((1/M)||s||_2^2), >= 1.
inline double papr(const cvec& s) {
  detail::require(!s.empty(), "papr: empty input");
  double peak = 0.0;
  double acc = 0.0;
  for (const cplx& v : s) {
    const double p = std::norm(v);
    peak = std::max(peak, p);
    acc += p;
  }
  detail::require_domain(acc > 0.0, "papr: all-zero signal");
  return peak / (acc / static_cast<double>(s.size()));
}

/// PAPR in dB, >= 0.
inline double papr_db(const cvec& s) { return 10.0 * std::log10(papr(s)); }

}  // namespace pdwave

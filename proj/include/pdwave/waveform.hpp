#pragma once

#include <cmath>
#include <numeric>

#include "pdwave/qpsk.hpp"
#include "pdwave/spectral.hpp"
#include "pdwave/types.hpp"

namespace pdwave {

/// Unimodular spectrum whose per-subcarrier phase stays within theta of the
/// payload's phase: |wrap(arg x_n - arg c_n)| <= theta.
struct DesignedSpectrum {
  cvec values;
  InfoSpectrum reference;
  double theta = 0.0;
};

/// Phase difference is the wrapped difference of arguments (multiplicative
/// phase shift), not the argument of the complex difference.
inline double phase_difference(cplx x, cplx c) {
  return wrap_phase(std::arg(x) - std::arg(c));
}

/**
 * Projects each component of `relaxed` onto the unit-circle arc
 * { e^{j phi} : |wrap(phi - arg c_n)| <= theta }:
 * keep the phase when the offset is inside the arc, clamp to the nearer arc
 * endpoint otherwise. A zero component maps to e^{j arg c_n} (any phase is
 * equidistant; zero offset is the minimal-perturbation choice).
 */
inline DesignedSpectrum pd_project(const cvec& relaxed, const InfoSpectrum& c, double theta) {
  detail::require(theta > 0.0 && theta < kPi / 4.0, "pd_project: theta must be in (0, pi/4)");
  detail::require(relaxed.size() == c.symbols.size(), "pd_project: length mismatch");
  DesignedSpectrum out;
  out.reference = c;
  out.theta = theta;
  out.values.resize(relaxed.size());
  for (std::size_t i = 0; i < relaxed.size(); ++i) {
    const double ref = std::arg(c.symbols[i]);
    if (relaxed[i] == cplx(0.0, 0.0)) {
      out.values[i] = std::polar(1.0, ref);
      continue;
    }
    const double delta = wrap_phase(std::arg(relaxed[i]) - ref);
    double phase;
    if (std::abs(delta) < theta) {
      phase = std::arg(relaxed[i]);
    } else if (delta >= theta) {
      phase = ref + theta;
    } else {
      phase = ref - theta;
    }
    out.values[i] = std::polar(1.0, phase);
  }
  return out;
}

/// max_n |wrap(arg x_n - arg c_n)| - theta; <= 0 iff every subcarrier meets
/// the phase-difference constraint.
inline double pd_violation(const cvec& x, const InfoSpectrum& c, double theta) {
  detail::require(x.size() == c.symbols.size(), "pd_violation: length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(phase_difference(x[i], c.symbols[i])));
  }
  return worst - theta;
}

/// Tradeoff weight w in [0,1] plus the unimodular radar reference spectrum.
struct BaselineWeights {
  double w = 0.65;
  cvec radar_ref;
};

/// Weighted-combination design x = w*c + (1-w)*x0. Not unimodular in general.
inline cvec baseline_design(const InfoSpectrum& c, const BaselineWeights& weights) {
  detail::require(weights.w >= 0.0 && weights.w <= 1.0, "baseline_design: w must be in [0,1]");
  detail::require(weights.radar_ref.size() == c.symbols.size(), "baseline_design: length mismatch");
  cvec out(c.symbols.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = weights.w * c.symbols[i] + (1.0 - weights.w) * weights.radar_ref[i];
  }
  return out;
}

/// Zadoff-Chu sequence of length n; root must be coprime to n for the CAZAC
/// property. Even n uses r*k^2, odd n uses r*k*(k+1).
inline cvec zadoff_chu(int n, int root) {
  detail::require(n >= 1 && root >= 1, "zadoff_chu: bad parameters");
  detail::require(std::gcd(n, root) == 1, "zadoff_chu: root must be coprime to n");
  cvec x(n);
  const int parity = n % 2;
  for (int k = 0; k < n; ++k) {
    const double phase = -kPi * root * static_cast<double>(k) * (k + parity) / n;
    x[k] = std::polar(1.0, phase);
  }
  return x;
}

/**
 * Deterministic unimodular reference spectrum with a low-PAPR time envelope.
 *
 * A Zadoff-Chu seed alone leaves ~2.6 dB of oversampled envelope ripple, so
 * the seed is refined by alternating projections between the unimodular
 * spectrum set and a time-envelope cap at 1.4 dB over the rms level. The
 * result lands at ~1.4 dB four-times-oversampled PAPR for n >= 4 (n = 2 and 3
 * are too short for any unimodular spectrum to get close to that).
 */
inline cvec radar_reference(int n, int root = 1) {
  detail::require(n >= 2, "radar_reference: n must be >= 2");
  cvec x = zadoff_chu(n, root);
  const TransformPlan plan(n, 4);
  const double cap_over_rms = std::pow(10.0, 1.4 / 20.0);
  for (int iter = 0; iter < 200; ++iter) {
    cvec s = synthesize_time(x, plan);
    const double rms = std::sqrt(detail::energy(s) / plan.m);
    const double cap = cap_over_rms * rms;
    for (cplx& v : s) {
      const double a = std::abs(v);
      if (a > cap) v *= cap / a;
    }
    const cvec b = analyze_freq(s, plan);
    for (int i = 0; i < n; ++i) {
      if (b[i] != cplx(0.0, 0.0)) x[i] = std::polar(1.0, std::arg(b[i]));
    }
  }
  return x;
}

}  // namespace pdwave

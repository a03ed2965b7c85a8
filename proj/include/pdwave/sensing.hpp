#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "pdwave/fft.hpp"
#include "pdwave/rng.hpp"
#include "pdwave/spectral.hpp"
#include "pdwave/types.hpp"

namespace pdwave {

/**
 * Radar-side system parameters. Primaries default to the simulated 24 GHz
 * setup; the sensing axes are derived from them. Sampling runs at the signal
 * bandwidth, so one delay bin is c/(2B) of range; slow-time sampling is one
 * full symbol (including the cyclic prefix).
 */
struct RadarParams {
  double carrier_hz = 24e9;
  double bandwidth_hz = 93.1e6;
  int n_subcarriers = 1024;
  double subcarrier_spacing_hz = 90.9e3;
  double symbol_duration_s = 11e-6;
  double cp_duration_s = 1.37e-6;
  double total_symbol_s = 12.37e-6;
  int frame_symbols = 256;

  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
  int cp_samples() const { return static_cast<int>(std::lround(cp_duration_s * bandwidth_hz)); }
  int symbol_samples_total() const { return n_subcarriers + cp_samples(); }
  /// Slow-time sampling interval reconstructed from integer sample counts.
  double slow_time_interval_s() const { return symbol_samples_total() / bandwidth_hz; }

  double range_resolution_m() const { return kSpeedOfLight / (2.0 * bandwidth_hz); }
  double unambiguous_range_m() const { return cp_samples() * range_resolution_m(); }
  double velocity_resolution_mps() const {
    return wavelength_m() / (2.0 * frame_symbols * slow_time_interval_s());
  }
  /// Doppler shifts are kept below a fifth of the subcarrier spacing.
  double unambiguous_velocity_mps() const {
    return wavelength_m() * subcarrier_spacing_hz / 10.0;
  }

  /// Normalized per-sample Doppler 2v/(lambda B) for a radial velocity.
  double doppler_per_sample(double velocity_mps) const {
    return 2.0 * velocity_mps / (wavelength_m() * bandwidth_hz);
  }
  /// Delay in samples for a target range.
  int delay_bin(double range_m) const {
    return static_cast<int>(std::lround(2.0 * range_m * bandwidth_hz / kSpeedOfLight));
  }
};

struct TargetSpec {
  double range_m = 0.0;
  double velocity_mps = 0.0;
  cplx amplitude = cplx(1.0, 0.0);
};

/// Sampled periodic ambiguity surface at the requested delay/Doppler bins.
struct AmbiguityGrid {
  std::vector<int> delays;
  std::vector<int> dopplers;
  std::vector<cplx> values;  // row-major delays x dopplers

  cplx at(std::size_t delay_idx, std::size_t doppler_idx) const {
    return values[delay_idx * dopplers.size() + doppler_idx];
  }
};

/**
 * Periodic ambiguity function AF(tau, f) = sum_m s(m) s*(m+tau) e^{j2pi f m/M}
 * with cyclic indexing. Per delay, the Doppler axis is one unnormalized
 * inverse transform of the lag product (evaluated directly when only a few
 * bins are requested).
 */
inline AmbiguityGrid ambiguity(const cvec& s, const std::vector<int>& delays,
                               const std::vector<int>& doppler_bins) {
  const int m = static_cast<int>(s.size());
  detail::require(m >= 1, "ambiguity: empty signal");
  for (int d : delays) detail::require(d >= 0 && d < m, "ambiguity: delay out of [0, M)");
  for (int f : doppler_bins) detail::require(f >= 0 && f < m, "ambiguity: Doppler bin out of [0, M)");

  AmbiguityGrid grid;
  grid.delays = delays;
  grid.dopplers = doppler_bins;
  grid.values.resize(delays.size() * doppler_bins.size());

  const bool use_fft = doppler_bins.size() * 4 > static_cast<std::size_t>(std::log2(m) + 1);
  cvec product(m);
  for (std::size_t di = 0; di < delays.size(); ++di) {
    const int tau = delays[di];
    for (int i = 0; i < m; ++i) product[i] = s[i] * std::conj(s[(i + tau) % m]);
    if (use_fft) {
      cvec spectrum = product;
      fft::backward_inplace(spectrum);
      for (std::size_t fi = 0; fi < doppler_bins.size(); ++fi) {
        grid.values[di * doppler_bins.size() + fi] = spectrum[doppler_bins[fi]];
      }
    } else {
      for (std::size_t fi = 0; fi < doppler_bins.size(); ++fi) {
        cplx acc(0.0, 0.0);
        for (int i = 0; i < m; ++i) {
          acc += product[i] * std::polar(1.0, kTwoPi * doppler_bins[fi] * i / m);
        }
        grid.values[di * doppler_bins.size() + fi] = acc;
      }
    }
  }
  return grid;
}

enum class CutAxis { delay, doppler };

/**
 * Peak sidelobe level of the zero cut: the delay cut at Doppler bin 0, or the
 * Doppler cut at delay 0. Mainlobe = the single peak bin; PSL is the largest
 * remaining magnitude over the peak magnitude, as 20 log10 of the amplitude
 * ratio.
 */
inline double zero_cut_psl_db(const AmbiguityGrid& grid, CutAxis axis) {
  std::vector<double> cut;
  if (axis == CutAxis::delay) {
    const auto it = std::find(grid.dopplers.begin(), grid.dopplers.end(), 0);
    detail::require(it != grid.dopplers.end(), "zero_cut_psl_db: grid lacks Doppler bin 0");
    const std::size_t fi = it - grid.dopplers.begin();
    cut.reserve(grid.delays.size());
    for (std::size_t di = 0; di < grid.delays.size(); ++di) cut.push_back(std::abs(grid.at(di, fi)));
  } else {
    const auto it = std::find(grid.delays.begin(), grid.delays.end(), 0);
    detail::require(it != grid.delays.end(), "zero_cut_psl_db: grid lacks delay 0");
    const std::size_t di = it - grid.delays.begin();
    cut.reserve(grid.dopplers.size());
    for (std::size_t fi = 0; fi < grid.dopplers.size(); ++fi) cut.push_back(std::abs(grid.at(di, fi)));
  }
  detail::require(cut.size() >= 2, "zero_cut_psl_db: cut needs at least two bins");
  const auto peak_it = std::max_element(cut.begin(), cut.end());
  detail::require_domain(*peak_it > 0.0, "zero_cut_psl_db: all-zero cut");
  double side = 0.0;
  for (auto it = cut.begin(); it != cut.end(); ++it) {
    if (it != peak_it) side = std::max(side, *it);
  }
  return 20.0 * std::log10(side / *peak_it);
}

/**
 * Critically-sampled single-symbol echo
 *   y(m) = sum_i b_i x_t((m - tau_i) mod N) e^{j2pi f_i (g T + Ncp + m)} + o(m)
 * where x_t is the N-point synthesis of the spectrum, tau_i the rounded delay
 * bin, f_i the per-sample Doppler, and g the symbol index within the frame
 * (the receiver slice starts one cyclic prefix after the symbol start).
 * Delays are cyclic; the prefix makes in-range targets circular.
 */
inline cvec synth_echo(const cvec& x, const std::vector<TargetSpec>& targets,
                       const RadarParams& params, double noise_var, Philox& rng,
                       int symbol_index = 0) {
  detail::require(static_cast<int>(x.size()) == params.n_subcarriers,
                  "synth_echo: spectrum length != n_subcarriers");
  detail::require(noise_var >= 0.0, "synth_echo: negative noise variance");
  for (const TargetSpec& t : targets) {
    detail::require(t.range_m >= 0.0 && t.range_m < params.unambiguous_range_m(),
                    "synth_echo: target range outside unambiguous region");
    detail::require(std::abs(t.velocity_mps) < params.unambiguous_velocity_mps(),
                    "synth_echo: target velocity outside unambiguous region");
  }

  const int n = params.n_subcarriers;
  const TransformPlan plan(n, 1);
  const cvec xt = synthesize_time(x, plan);

  cvec y(n, cplx(0.0, 0.0));
  const double slice_start =
      static_cast<double>(symbol_index) * params.symbol_samples_total() + params.cp_samples();
  for (const TargetSpec& t : targets) {
    const int tau = params.delay_bin(t.range_m);
    const double f = params.doppler_per_sample(t.velocity_mps);
    for (int m = 0; m < n; ++m) {
      const double phase = kTwoPi * f * (slice_start + m);
      y[m] += t.amplitude * xt[((m - tau) % n + n) % n] * std::polar(1.0, phase);
    }
  }
  if (noise_var > 0.0) {
    for (int m = 0; m < n; ++m) y[m] += rng.next_cgaussian(noise_var);
  }
  return y;
}

/**
 * Matched-filter range profile |(1/N) IDFT( DFT(y) .* conj(X) )|. For a
 * unimodular spectrum this is the exact periodic cross-correlation with the
 * transmitted time signal, so a clean echo at delay d gives N|b| at bin d and
 * zero elsewhere. A non-unimodular spectrum is normalized to unit magnitude
 * first (flagged via `normalized`).
 */
inline std::vector<double> range_profile(const cvec& y_echo, const cvec& x,
                                         const RadarParams& params, bool* normalized = nullptr) {
  const int n = params.n_subcarriers;
  detail::require(static_cast<int>(y_echo.size()) == n, "range_profile: echo length mismatch");
  detail::require(static_cast<int>(x.size()) == n, "range_profile: spectrum length mismatch");

  if (normalized) *normalized = false;
  cvec xn = x;
  for (cplx& v : xn) {
    const double a = std::abs(v);
    if (std::abs(a - 1.0) > 1e-6) {
      if (normalized) *normalized = true;
      detail::require_domain(a > 0.0, "range_profile: zero spectrum entry");
      v /= a;
    }
  }

  cvec spec = y_echo;
  fft::forward_inplace(spec);
  for (int i = 0; i < n; ++i) spec[i] *= std::conj(xn[i]);
  fft::backward_inplace(spec);
  std::vector<double> profile(n);
  for (int i = 0; i < n; ++i) profile[i] = std::abs(spec[i]) / n;
  return profile;
}

/// Delay x Doppler magnitude surface with physical bin scales attached.
struct RangeDopplerMap {
  int n_delay = 0;
  int n_doppler = 0;
  double range_resolution_m = 0.0;
  double velocity_resolution_mps = 0.0;
  std::vector<double> magnitude;  // row-major delay x Doppler, all >= 0

  double at(int delay, int doppler) const { return magnitude[static_cast<std::size_t>(delay) * n_doppler + doppler]; }
};

/**
 * Frame-level processing: per symbol, conjugate-multiply the echo spectrum by
 * the transmitted spectrum; DFT of length G across the symbol axis per
 * subcarrier (slow time -> Doppler); IDFT across subcarriers (-> delay).
 * Doppler bins above G/2 alias to negative velocities.
 */
inline RangeDopplerMap range_doppler(const std::vector<cvec>& frame_echoes,
                                     const std::vector<cvec>& frame_spectra,
                                     const RadarParams& params) {
  const int n = params.n_subcarriers;
  const int g = static_cast<int>(frame_echoes.size());
  detail::require(g >= 1, "range_doppler: empty frame");
  detail::require(frame_spectra.size() == frame_echoes.size(),
                  "range_doppler: spectra/echo count mismatch");
  for (int i = 0; i < g; ++i) {
    detail::require(static_cast<int>(frame_echoes[i].size()) == n &&
                        static_cast<int>(frame_spectra[i].size()) == n,
                    "range_doppler: symbol length mismatch");
  }

  // matched multiply per symbol, kept as G rows of N bins
  std::vector<cvec> matched(g);
  for (int i = 0; i < g; ++i) {
    matched[i] = frame_echoes[i];
    fft::forward_inplace(matched[i]);
    for (int k = 0; k < n; ++k) matched[i][k] *= std::conj(frame_spectra[i][k]);
  }

  // slow-time DFT per subcarrier
  std::vector<cvec> slow(g, cvec(n));
  cvec column(g);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < g; ++i) column[i] = matched[i][k];
    fft::forward_inplace(column);
    for (int i = 0; i < g; ++i) slow[i][k] = column[i];
  }

  RangeDopplerMap map;
  map.n_delay = n;
  map.n_doppler = g;
  map.range_resolution_m = params.range_resolution_m();
  map.velocity_resolution_mps = params.velocity_resolution_mps();
  map.magnitude.resize(static_cast<std::size_t>(n) * g);
  for (int d = 0; d < g; ++d) {
    cvec row = slow[d];
    fft::backward_inplace(row);
    for (int k = 0; k < n; ++k) {
      map.magnitude[static_cast<std::size_t>(k) * g + d] = std::abs(row[k]) / n;
    }
  }
  return map;
}

struct Detection {
  double range_m = 0.0;
  double velocity_mps = 0.0;
  double magnitude = 0.0;
};

/**
 * k strongest strict local maxima over the cyclic 8-neighborhood, in physical
 * units, ordered by magnitude. Doppler bins wrap to signed velocities. May
 * return fewer than k peaks (flagged via `truncated`); a flat map has none.
 */
inline std::vector<Detection> detect_peaks(const RangeDopplerMap& map, int k,
                                           bool* truncated = nullptr) {
  detail::require(k >= 1, "detect_peaks: k must be >= 1");
  const int nd = map.n_delay;
  const int nf = map.n_doppler;
  std::vector<Detection> peaks;
  for (int d = 0; d < nd; ++d) {
    for (int f = 0; f < nf; ++f) {
      const double v = map.at(d, f);
      bool is_peak = true;
      for (int dd = -1; dd <= 1 && is_peak; ++dd) {
        for (int df = -1; df <= 1; ++df) {
          if (dd == 0 && df == 0) continue;
          if (v <= map.at((d + dd + nd) % nd, (f + df + nf) % nf)) {
            is_peak = false;
            break;
          }
        }
      }
      if (!is_peak) continue;
      Detection det;
      det.range_m = d * map.range_resolution_m;
      const int signed_bin = f < nf - f ? f : f - nf;
      det.velocity_mps = signed_bin * map.velocity_resolution_mps;
      det.magnitude = v;
      peaks.push_back(det);
    }
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Detection& a, const Detection& b) { return a.magnitude > b.magnitude; });
  if (truncated) *truncated = static_cast<int>(peaks.size()) < k;
  if (static_cast<int>(peaks.size()) > k) peaks.resize(k);
  return peaks;
}

}  // namespace pdwave

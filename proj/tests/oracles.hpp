#pragma once

// Test-only reference implementations, kept independent of the production
// paths they check: dense-matrix transforms, exhaustive projections, grid
// searches, and a double-loop ambiguity sum.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pdwave/rng.hpp"
#include "pdwave/types.hpp"

namespace oracles {

using pdwave::cplx;
using pdwave::cvec;

/// s_m = sum_n x_n e^{j2pi mn/M} by explicit O(MN) accumulation.
inline cvec dense_synthesize(const cvec& x, int m_total) {
  const int n = static_cast<int>(x.size());
  cvec s(m_total, cplx(0.0, 0.0));
  for (int m = 0; m < m_total; ++m) {
    for (int k = 0; k < n; ++k) {
      s[m] += x[k] * std::polar(1.0, 2.0 * pdwave::kPi * m * k / m_total);
    }
  }
  return s;
}

/// b_n = (1/M) sum_m g_m e^{-j2pi mn/M} by explicit accumulation.
inline cvec dense_analyze(const cvec& g, int n_bins) {
  const int m_total = static_cast<int>(g.size());
  cvec b(n_bins, cplx(0.0, 0.0));
  for (int k = 0; k < n_bins; ++k) {
    for (int m = 0; m < m_total; ++m) {
      b[k] += g[m] * std::polar(1.0, -2.0 * pdwave::kPi * m * k / m_total);
    }
  }
  for (cplx& v : b) v /= static_cast<double>(m_total);
  return b;
}

/// Nearest point to z on the arc {e^{j phi} : phi in [center-theta, center+theta]}
/// by exhaustive search over `points`+1 phases; returns the winning phase.
inline double grid_arc_projection(cplx z, double center, double theta, long points = 1000000) {
  const double step = 2.0 * theta / static_cast<double>(points);
  double best_phase = center - theta;
  double best_dist = std::norm(z - std::polar(1.0, best_phase));
  // incremental rotation keeps the scan at one complex multiply per step
  cplx p = std::polar(1.0, center - theta);
  const cplx rot = std::polar(1.0, step);
  for (long i = 1; i <= points; ++i) {
    p *= rot;
    const double d = std::norm(z - p);
    if (d < best_dist) {
      best_dist = d;
      best_phase = center - theta + step * static_cast<double>(i);
    }
  }
  return best_phase;
}

/// Capped direction by dense scan over gamma (water-filling level) instead of
/// bisection; returns the unit-norm candidate with the best norm match.
inline cvec grid_capped_direction(const cvec& q, double alpha, long gamma_points = 200000) {
  const int m = static_cast<int>(q.size());
  const double cap = std::sqrt(alpha / m);
  double qnorm = 0.0;
  for (const cplx& v : q) qnorm += std::norm(v);
  qnorm = std::sqrt(qnorm);

  auto build = [&](double gamma) {
    cvec v(m);
    for (int i = 0; i < m; ++i) {
      const double mag = std::abs(q[i]);
      if (mag == 0.0) {
        v[i] = cplx(0.0, 0.0);
      } else if (mag / (2.0 * gamma) < cap) {
        v[i] = q[i] / (2.0 * gamma);
      } else {
        v[i] = (cap / mag) * q[i];
      }
    }
    return v;
  };

  // log-spaced scan: the norm is monotone in gamma, pick the closest to 1
  double best_gamma = qnorm;
  double best_err = 1e300;
  const double lo = qnorm * 1e-8;
  for (long i = 0; i <= gamma_points; ++i) {
    const double gamma = lo * std::pow(qnorm / lo, static_cast<double>(i) / gamma_points);
    const cvec v = build(gamma);
    double nrm = 0.0;
    for (const cplx& c : v) nrm += std::norm(c);
    const double err = std::abs(nrm - 1.0);
    if (err < best_err) {
      best_err = err;
      best_gamma = gamma;
    }
  }
  return build(best_gamma);
}

/// min over a beta grid of ||q - beta*v||^2 for a fixed direction v.
inline double best_objective_over_beta(const cvec& q, const cvec& v, long beta_points = 20000) {
  double qnorm = 0.0;
  for (const cplx& c : q) qnorm += std::norm(c);
  qnorm = std::sqrt(qnorm);
  double best = 1e300;
  for (long i = 0; i <= beta_points; ++i) {
    const double beta = 2.0 * qnorm * static_cast<double>(i) / beta_points;
    double obj = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) obj += std::norm(q[k] - beta * v[k]);
    best = std::min(best, obj);
  }
  return best;
}

/// AF(tau, f) by the raw double loop.
inline cplx dense_ambiguity(const cvec& s, int tau, int f) {
  const int m = static_cast<int>(s.size());
  cplx acc(0.0, 0.0);
  for (int i = 0; i < m; ++i) {
    acc += s[i] * std::conj(s[(i + tau) % m]) * std::polar(1.0, 2.0 * pdwave::kPi * f * i / m);
  }
  return acc;
}

/// Classical critically-sampled OFDM PAPR CCDF approximation 1-(1-e^-g)^N.
inline double classical_ofdm_ccdf(double threshold_db, int n) {
  const double g = std::pow(10.0, threshold_db / 10.0);
  return 1.0 - std::pow(1.0 - std::exp(-g), n);
}

inline cvec random_cvec(int n, pdwave::Philox& rng, double scale = 1.0) {
  cvec v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = cplx(scale * (2.0 * rng.next_double() - 1.0), scale * (2.0 * rng.next_double() - 1.0));
  }
  return v;
}

}  // namespace oracles

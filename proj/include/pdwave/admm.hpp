#pragma once

#include <cmath>
#include <limits>

#include "pdwave/spectral.hpp"
#include "pdwave/types.hpp"
#include "pdwave/waveform.hpp"

namespace pdwave {

/// Knobs for the splitting solver. alpha is the PAPR cap as a linear ratio.
struct SolverConfig {
  double theta = 0.6;                      // phase-difference threshold, (0, pi/4)
  double alpha = std::pow(10.0, 0.18);     // linear PAPR cap (1.8 dB)
  double rho = 1e4;                        // penalty factor
  int max_iters = 150;
  double residual_tol = 1e-6;              // early exit on ||Ax-s||/||s||
  double bisect_tol = 1e-10;               // |f(gamma)| target for the norm bisection
  double bisect_gamma_hi = 0.0;            // initial right bracket; 0 -> ||q||_2
  int oversampling = 4;

  void validate() const {
    detail::require(theta > 0.0 && theta < kPi / 4.0, "SolverConfig: theta must be in (0, pi/4)");
    detail::require(alpha >= 1.0, "SolverConfig: alpha must be >= 1");
    detail::require(rho > 0.0, "SolverConfig: rho must be > 0");
    detail::require(max_iters >= 1, "SolverConfig: max_iters must be >= 1");
    detail::require(residual_tol >= 0.0, "SolverConfig: residual_tol must be >= 0");
    detail::require(bisect_tol > 0.0, "SolverConfig: bisect_tol must be > 0");
    detail::require(oversampling >= 1, "SolverConfig: oversampling must be >= 1");
  }
};

/// Per-iteration diagnostics. papr_db tracks the best feasible design found so
/// far; papr_iter_db is the current iterate and papr_s_db the auxiliary
/// time-domain variable (NaN while it is collapsed to zero).
struct TraceRow {
  int iter = 0;
  double papr_db = 0.0;
  double papr_iter_db = 0.0;
  double papr_s_db = 0.0;
  double primal_residual = 0.0;
  double pd_violation = 0.0;
  double beta = 0.0;
};

/// ADMM iterate: spectrum x, time-domain split variable s, scaled dual y.
struct SolverState {
  cvec x;
  cvec s;
  cvec y;
  int k = 0;
  std::vector<TraceRow> trace;
};

struct VUpdateResult {
  cvec v;           // unit norm, |v_m| <= sqrt(alpha/M)
  double gamma = 0.0;
  bool degenerate_fill = false;
};

namespace detail {

inline cvec sub_scaled(const cvec& a, const cvec& b, double scale) {
  cvec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - scale * b[i];
  return out;
}

inline cvec capped_direction(const cvec& q, const std::vector<double>& mags, double gamma,
                             double cap) {
  cvec v(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (mags[i] == 0.0) {
      v[i] = cplx(0.0, 0.0);
    } else if (mags[i] / (2.0 * gamma) < cap) {
      v[i] = q[i] / (2.0 * gamma);
    } else {
      v[i] = (cap / mags[i]) * q[i];
    }
  }
  return v;
}

}  // namespace detail

/**
 * Unit-norm direction under a per-entry magnitude cap sqrt(alpha/M):
 * v_m = q_m/(2 gamma) below the cap, cap * e^{j arg q_m} at it, with gamma
 * chosen by bisection so that ||v||_2 = 1. f(gamma) = ||v(gamma)||^2 - 1 is
 * non-increasing; gamma_hi = ||q||_2 always brackets the root from the right
 * since ||v(||q||)|| <= 1/2.
 *
 * If too few entries of q are nonzero for the cap to reach unit norm, zero
 * entries are raised (in index order, phase 0) until it is reachable; this is
 * deterministic and flagged in the result.
 */
inline VUpdateResult v_update(const cvec& q, double alpha, double tol = 1e-10,
                              double gamma_hi = 0.0) {
  detail::require(!q.empty(), "v_update: empty input");
  detail::require(alpha >= 1.0, "v_update: alpha must be >= 1");
  detail::require(tol > 0.0, "v_update: tol must be > 0");
  const int m = static_cast<int>(q.size());
  const double cap = std::sqrt(alpha / m);

  std::vector<double> mags(m);
  int nonzero = 0;
  double max_mag = 0.0;
  for (int i = 0; i < m; ++i) {
    mags[i] = std::abs(q[i]);
    if (mags[i] > 0.0) ++nonzero;
    max_mag = std::max(max_mag, mags[i]);
  }

  VUpdateResult out;
  cvec qe = q;
  if (static_cast<double>(nonzero) * alpha < static_cast<double>(m)) {
    out.degenerate_fill = true;
    if (nonzero == 0) {
      // nothing to bisect against: emit caps plus one partial entry directly
      out.v.assign(m, cplx(0.0, 0.0));
      const int full = static_cast<int>(std::floor(static_cast<double>(m) / alpha));
      double acc = 0.0;
      for (int i = 0; i < full; ++i) {
        out.v[i] = cap;
        acc += cap * cap;
      }
      if (acc < 1.0 && full < m) out.v[full] = std::sqrt(1.0 - acc);
      return out;
    }
    int need = static_cast<int>(std::ceil(static_cast<double>(m) / alpha)) - nonzero;
    for (int i = 0; i < m && need > 0; ++i) {
      if (mags[i] == 0.0) {
        qe[i] = cplx(max_mag, 0.0);
        mags[i] = max_mag;
        --need;
      }
    }
  }

  double hi = gamma_hi > 0.0 ? gamma_hi : detail::norm_l2(qe);
  double lo = 0.0;
  double gamma = hi;
  for (int iter = 0; iter < 200; ++iter) {
    gamma = 0.5 * (lo + hi);
    double nrm2 = 0.0;
    for (int i = 0; i < m; ++i) {
      nrm2 += std::pow(std::min(mags[i] / (2.0 * gamma), cap), 2);
    }
    const double f = nrm2 - 1.0;
    if (std::abs(f) < tol) break;
    if (f > 0.0) {
      lo = gamma;
    } else {
      hi = gamma;
    }
  }
  out.gamma = gamma;
  out.v = detail::capped_direction(qe, mags, gamma, cap);
  return out;
}

/// Optimal nonnegative scale for s = beta*v against target q.
inline double beta_scale(const cvec& v, const cvec& q) {
  detail::require(v.size() == q.size(), "beta_scale: length mismatch");
  double re = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    re += std::real(std::conj(v[i]) * q[i]);
  }
  return std::max(re, 0.0);
}

/// Relax-then-project spectrum step: project (1/M) A^H (s - y/rho) onto the
/// unimodular phase-constrained set. Output is always feasible.
inline cvec x_update(const SolverState& state, const InfoSpectrum& c, const SolverConfig& config) {
  const TransformPlan plan(c.size(), config.oversampling);
  const cvec b = analyze_freq(detail::sub_scaled(state.s, state.y, 1.0 / config.rho), plan);
  return pd_project(b, c, config.theta).values;
}

/// Time-domain step: s = beta * v against q = A x + y/rho. Requires state.x
/// to hold this iteration's spectrum already.
inline cvec s_update(const SolverState& state, const SolverConfig& config) {
  const int m = static_cast<int>(state.s.size());
  detail::require(m % static_cast<int>(state.x.size()) == 0, "s_update: inconsistent state");
  const TransformPlan plan(static_cast<int>(state.x.size()), config.oversampling);
  cvec q = synthesize_time(state.x, plan);
  for (int i = 0; i < m; ++i) q[i] += state.y[i] / config.rho;
  const VUpdateResult vu = v_update(q, config.alpha, config.bisect_tol, config.bisect_gamma_hi);
  const double beta = beta_scale(vu.v, q);
  cvec s(m);
  for (int i = 0; i < m; ++i) s[i] = beta * vu.v[i];
  return s;
}

/// Multiplier step y + rho*(A x - s); requires x and s already updated.
inline cvec dual_update(const SolverState& state, const SolverConfig& config) {
  const TransformPlan plan(static_cast<int>(state.x.size()), config.oversampling);
  const cvec ax = synthesize_time(state.x, plan);
  cvec y(state.y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = state.y[i] + config.rho * (ax[i] - state.s[i]);
  }
  return y;
}

struct DesignResult {
  DesignedSpectrum spectrum;  // best feasible iterate encountered
  cvec time_waveform;         // synthesize_time of that spectrum
  std::vector<TraceRow> trace;
  int iterations = 0;
  bool converged = false;       // residual stop fired
  bool beta_collapsed = false;  // auxiliary variable was zero at termination
};

/**
 * Alternates the spectrum projection, the capped time-domain step and the
 * multiplier update, starting from x = c, s = A c, y = 0. Every spectrum
 * iterate is feasible (unimodular, phase offsets within theta), so the
 * returned design is the iterate whose synthesized waveform had the lowest
 * PAPR; the iteration itself does not descend monotonically.
 *
 * The returned waveform is synthesized from that spectrum, not the auxiliary
 * s variable (only the spectrum carries the feasibility guarantees).
 */
inline DesignResult solve(const InfoSpectrum& c, const SolverConfig& config) {
  config.validate();
  detail::require(c.size() >= 1, "solve: empty payload");
  const TransformPlan plan(c.size(), config.oversampling);

  SolverState st;
  st.x = c.symbols;
  st.s = synthesize_time(st.x, plan);
  st.y.assign(plan.m, cplx(0.0, 0.0));

  cvec best_x = st.x;
  double best_papr = papr_db(st.s);
  bool converged = false;
  bool collapsed = false;

  for (int k = 1; k <= config.max_iters; ++k) {
    const cvec b = analyze_freq(detail::sub_scaled(st.s, st.y, 1.0 / config.rho), plan);
    st.x = pd_project(b, c, config.theta).values;

    const cvec ax = synthesize_time(st.x, plan);
    const double iter_papr = papr_db(ax);
    if (iter_papr < best_papr) {
      best_papr = iter_papr;
      best_x = st.x;
    }

    cvec q = ax;
    for (int i = 0; i < plan.m; ++i) q[i] += st.y[i] / config.rho;
    const VUpdateResult vu = v_update(q, config.alpha, config.bisect_tol, config.bisect_gamma_hi);
    const double beta = beta_scale(vu.v, q);
    for (int i = 0; i < plan.m; ++i) st.s[i] = beta * vu.v[i];

    double resid2 = 0.0;
    for (int i = 0; i < plan.m; ++i) {
      const cplx d = ax[i] - st.s[i];
      st.y[i] += config.rho * d;
      resid2 += std::norm(d);
    }
    const double resid = std::sqrt(resid2);

    TraceRow row;
    row.iter = k;
    row.papr_db = best_papr;
    row.papr_iter_db = iter_papr;
    row.papr_s_db = beta > 0.0 ? papr_db(st.s) : std::numeric_limits<double>::quiet_NaN();
    row.primal_residual = resid;
    row.pd_violation = pd_violation(st.x, c, config.theta);
    row.beta = beta;
    st.trace.push_back(row);
    st.k = k;

    collapsed = beta <= 0.0;
    if (!collapsed && resid <= config.residual_tol * detail::norm_l2(st.s)) {
      converged = true;
      break;
    }
  }

  DesignResult result;
  result.spectrum = DesignedSpectrum{best_x, c, config.theta};
  result.time_waveform = synthesize_time(best_x, plan);
  result.trace = std::move(st.trace);
  result.iterations = st.k;
  result.converged = converged;
  result.beta_collapsed = collapsed;
  return result;
}

}  // namespace pdwave

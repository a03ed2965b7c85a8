#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdwave/admm.hpp"
#include "pdwave/comm.hpp"
#include "pdwave/io.hpp"
#include "pdwave/parallel.hpp"
#include "pdwave/sensing.hpp"

// Experiment drivers behind the CLI. Every run is a pure function of
// (config, seed); each output CSV embeds the config as "# key = value" lines,
// and a manifest records the config echo plus a git-style blob hash of every
// file written.

namespace pdwave::harness {

using MetaList = std::vector<std::pair<std::string, std::string>>;

namespace hdetail {

inline uint64_t stream_id(uint64_t purpose, uint64_t point, uint64_t trial) {
  return pdwave::detail::make_stream(purpose, point, trial);
}

}  // namespace hdetail

/// Collects output files and writes them (plus manifest.json) in one pass.
class RunWriter {
 public:
  RunWriter(std::filesystem::path out_dir, std::string subcommand, MetaList config)
      : dir_(std::move(out_dir)), subcommand_(std::move(subcommand)), config_(std::move(config)) {
    start_ = std::chrono::steady_clock::now();
  }

  void add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
  }

  void add_csv(const std::string& name, const Csv& csv) { add(name, csv.str()); }

  /// Stamps the config echo into a CSV before columns are set.
  Csv make_csv() const {
    Csv csv;
    csv.meta("subcommand", subcommand_);
    csv.meta("rng", std::string(Philox::kAlgorithmId));
    for (const auto& [k, v] : config_) csv.meta(k, v);
    return csv;
  }

  void commit() {
    namespace fs = std::filesystem;
    fs::create_directories(dir_);
    nlohmann::ordered_json manifest;
    manifest["subcommand"] = subcommand_;
    manifest["rng"] = Philox::kAlgorithmId;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : config_) cfg[k] = v;
    manifest["config"] = cfg;
    nlohmann::ordered_json outputs;
    for (const auto& [name, content] : files_) {
      write_text_file(dir_ / name, content);
      outputs[name] = git_blob_sha1(content);
    }
    manifest["outputs"] = outputs;
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_text_file(dir_ / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  std::filesystem::path dir_;
  std::string subcommand_;
  MetaList config_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// design
// ---------------------------------------------------------------------------

struct DesignConfig {
  int n = 1024;
  int oversampling = 4;
  double theta = 0.6;
  double alpha_db = 1.8;
  double rho = 1e4;
  int max_iters = 150;
  double residual_tol = 1e-6;
  uint64_t seed = 1;
  std::vector<double> phases;  // optional explicit QPSK phases; empty -> random payload

  SolverConfig solver() const {
    SolverConfig cfg;
    cfg.theta = theta;
    cfg.alpha = std::pow(10.0, alpha_db / 10.0);
    cfg.rho = rho;
    cfg.max_iters = max_iters;
    cfg.residual_tol = residual_tol;
    cfg.oversampling = oversampling;
    return cfg;
  }

  MetaList meta() const {
    MetaList m = {{"n", std::to_string(n)},
                  {"oversampling", std::to_string(oversampling)},
                  {"theta", format_g17(theta)},
                  {"alpha_db", format_g17(alpha_db)},
                  {"rho", format_g17(rho)},
                  {"max_iters", std::to_string(max_iters)},
                  {"residual_tol", format_g17(residual_tol)},
                  {"seed", std::to_string(seed)}};
    if (!phases.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < phases.size(); ++i) {
        if (i) joined += ',';
        joined += format_g17(phases[i]);
      }
      m.emplace_back("phases", joined);
    }
    return m;
  }

  InfoSpectrum payload() const {
    if (!phases.empty()) {
      InfoSpectrum c;
      c.symbols.reserve(phases.size());
      for (double p : phases) c.symbols.push_back(std::polar(1.0, p));
      c.bits = demodulate_qpsk(c.symbols);
      return c;
    }
    Philox rng(seed, hdetail::stream_id(pdwave::detail::kStreamBits, 0, 0));
    return modulate_qpsk(random_bits(2 * static_cast<std::size_t>(n), rng));
  }
};

struct DesignOutputs {
  double input_papr_db = 0.0;
  double output_papr_db = 0.0;
  double max_pd = 0.0;
  int iterations = 0;
  bool converged = false;
  bool beta_collapsed = false;
  DesignResult result;
};

inline DesignOutputs run_design(const DesignConfig& config, const std::filesystem::path& out_dir) {
  const InfoSpectrum c = config.payload();
  const SolverConfig solver_cfg = config.solver();
  const TransformPlan plan(c.size(), config.oversampling);

  DesignOutputs out;
  out.input_papr_db = papr_db(synthesize_time(c.symbols, plan));
  out.result = solve(c, solver_cfg);
  out.output_papr_db = papr_db(out.result.time_waveform);
  out.max_pd = pd_violation(out.result.spectrum.values, c, config.theta) + config.theta;
  out.iterations = out.result.iterations;
  out.converged = out.result.converged;
  out.beta_collapsed = out.result.beta_collapsed;

  RunWriter writer(out_dir, "design", config.meta());

  Csv spectrum = writer.make_csv();
  spectrum.columns({"n", "c_re", "c_im", "x_re", "x_im", "phase_diff"});
  for (int i = 0; i < c.size(); ++i) {
    const cplx xv = out.result.spectrum.values[i];
    spectrum.row()
        .cell(i)
        .cell(c.symbols[i].real())
        .cell(c.symbols[i].imag())
        .cell(xv.real())
        .cell(xv.imag())
        .cell(phase_difference(xv, c.symbols[i]));
  }
  writer.add_csv("spectrum.csv", spectrum);

  Csv waveform = writer.make_csv();
  waveform.columns({"m", "s_re", "s_im", "s_abs"});
  for (int i = 0; i < plan.m; ++i) {
    const cplx sv = out.result.time_waveform[i];
    waveform.row().cell(i).cell(sv.real()).cell(sv.imag()).cell(std::abs(sv));
  }
  writer.add_csv("waveform.csv", waveform);

  Csv trace = writer.make_csv();
  trace.columns({"iter", "papr_db", "primal_residual", "pd_violation", "beta"});
  for (const TraceRow& r : out.result.trace) {
    trace.row()
        .cell(r.iter)
        .cell(r.papr_db)
        .cell(r.primal_residual)
        .cell(r.pd_violation)
        .cell(r.beta);
  }
  writer.add_csv("trace.csv", trace);

  Csv summary = writer.make_csv();
  summary.columns({"input_papr_db", "output_papr_db", "max_pd", "iterations", "converged",
                   "beta_collapsed", "final_iterate_papr_db", "final_s_papr_db"});
  const TraceRow& last = out.result.trace.back();
  summary.row()
      .cell(out.input_papr_db)
      .cell(out.output_papr_db)
      .cell(out.max_pd)
      .cell(out.iterations)
      .cell(static_cast<int>(out.converged))
      .cell(static_cast<int>(out.beta_collapsed))
      .cell(last.papr_iter_db)
      .cell(last.papr_s_db);
  writer.add_csv("summary.csv", summary);

  writer.commit();
  return out;
}

// ---------------------------------------------------------------------------
// ccdf
// ---------------------------------------------------------------------------

struct CcdfCurve {
  std::vector<double> thresholds_db;   // sorted, 0.1 dB default grid
  std::vector<double> probabilities;   // Pr(PAPR >= threshold), non-increasing
};

struct CcdfConfig {
  std::string method = "ofdm";  // ofdm | plpoi | baseline
  int n = 1024;
  int oversampling = 4;
  int trials = 1000;
  uint64_t seed = 1;
  double theta = 0.6;
  double alpha_db = 1.8;
  double rho = 1e4;
  int max_iters = 150;
  double residual_tol = 1e-6;
  double w = 0.65;
  int radar_root = 1;
  double grid_step_db = 0.1;

  MetaList meta() const {
    return {{"method", method},
            {"n", std::to_string(n)},
            {"oversampling", std::to_string(oversampling)},
            {"trials", std::to_string(trials)},
            {"seed", std::to_string(seed)},
            {"theta", format_g17(theta)},
            {"alpha_db", format_g17(alpha_db)},
            {"rho", format_g17(rho)},
            {"max_iters", std::to_string(max_iters)},
            {"residual_tol", format_g17(residual_tol)},
            {"w", format_g17(w)},
            {"radar_root", std::to_string(radar_root)},
            {"grid_step_db", format_g17(grid_step_db)}};
  }
};

/// PAPR of one designed symbol per trial, on disjoint RNG streams.
inline std::vector<double> papr_samples(const CcdfConfig& config) {
  pdwave::detail::require(config.trials >= 1, "papr_samples: trials must be >= 1");
  pdwave::detail::require(
      config.method == "ofdm" || config.method == "plpoi" || config.method == "baseline",
      "papr_samples: unknown method");

  SolverConfig solver_cfg;
  solver_cfg.theta = config.theta;
  solver_cfg.alpha = std::pow(10.0, config.alpha_db / 10.0);
  solver_cfg.rho = config.rho;
  solver_cfg.max_iters = config.max_iters;
  solver_cfg.residual_tol = config.residual_tol;
  solver_cfg.oversampling = config.oversampling;
  if (config.method == "plpoi") solver_cfg.validate();

  BaselineWeights weights;
  if (config.method == "baseline") {
    weights.w = config.w;
    weights.radar_ref = radar_reference(config.n, config.radar_root);
  }

  const TransformPlan plan(config.n, config.oversampling);
  std::vector<double> samples(config.trials);
  pdwave::detail::parallel_for(config.trials, [&](int t) {
    Philox rng(config.seed, hdetail::stream_id(pdwave::detail::kStreamBits, 0, t));
    const InfoSpectrum c = modulate_qpsk(random_bits(2 * static_cast<std::size_t>(config.n), rng));
    if (config.method == "ofdm") {
      samples[t] = papr_db(synthesize_time(c.symbols, plan));
    } else if (config.method == "plpoi") {
      samples[t] = papr_db(solve(c, solver_cfg).time_waveform);
    } else {
      samples[t] = papr_db(synthesize_time(baseline_design(c, weights), plan));
    }
  });
  return samples;
}

inline CcdfCurve empirical_ccdf(const std::vector<double>& samples_db, double step_db) {
  pdwave::detail::require(!samples_db.empty() && step_db > 0.0, "empirical_ccdf: bad input");
  const double lo = std::floor(*std::min_element(samples_db.begin(), samples_db.end()) / step_db) * step_db;
  const double hi = std::ceil(*std::max_element(samples_db.begin(), samples_db.end()) / step_db) * step_db;
  CcdfCurve curve;
  for (double t = lo; t <= hi + step_db / 2; t += step_db) {
    long long count = 0;
    for (double s : samples_db) count += s >= t;
    curve.thresholds_db.push_back(t);
    curve.probabilities.push_back(static_cast<double>(count) / samples_db.size());
  }
  return curve;
}

struct CcdfOutputs {
  std::vector<double> samples_db;
  CcdfCurve curve;
  double min_papr_db = 0.0;
  double max_papr_db = 0.0;
  double mean_papr_db = 0.0;
};

inline CcdfOutputs run_ccdf(const CcdfConfig& config, const std::filesystem::path& out_dir) {
  pdwave::detail::require(config.trials >= 100, "run_ccdf: trials must be >= 100");
  CcdfOutputs out;
  out.samples_db = papr_samples(config);
  out.curve = empirical_ccdf(out.samples_db, config.grid_step_db);
  out.min_papr_db = *std::min_element(out.samples_db.begin(), out.samples_db.end());
  out.max_papr_db = *std::max_element(out.samples_db.begin(), out.samples_db.end());
  out.mean_papr_db = 0.0;
  for (double s : out.samples_db) out.mean_papr_db += s;
  out.mean_papr_db /= static_cast<double>(out.samples_db.size());

  RunWriter writer(out_dir, "ccdf", config.meta());

  Csv ccdf = writer.make_csv();
  ccdf.columns({"threshold_db", "ccdf"});
  for (std::size_t i = 0; i < out.curve.thresholds_db.size(); ++i) {
    ccdf.row().cell(out.curve.thresholds_db[i]).cell(out.curve.probabilities[i]);
  }
  writer.add_csv("ccdf.csv", ccdf);

  Csv samples = writer.make_csv();
  samples.columns({"trial", "papr_db"});
  for (std::size_t i = 0; i < out.samples_db.size(); ++i) {
    samples.row().cell(static_cast<int>(i)).cell(out.samples_db[i]);
  }
  writer.add_csv("papr_samples.csv", samples);

  Csv summary = writer.make_csv();
  summary.columns({"min_papr_db", "max_papr_db", "mean_papr_db"});
  summary.row().cell(out.min_papr_db).cell(out.max_papr_db).cell(out.mean_papr_db);
  writer.add_csv("summary.csv", summary);

  writer.commit();
  return out;
}

// ---------------------------------------------------------------------------
// ber
// ---------------------------------------------------------------------------

struct BerConfig {
  std::string method = "plpoi";  // ofdm | plpoi | baseline
  std::string channel = "awgn";  // awgn | rayleigh
  std::vector<double> ebn0_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  int n = 1024;
  int trials = 100;  // OFDM symbols per grid point
  uint64_t seed = 1;
  double theta = 0.5;
  double alpha_db = 1.8;
  double rho = 1e4;
  int max_iters = 150;
  double residual_tol = 1e-6;
  double w = 0.288;
  int radar_root = 1;

  BerMethod ber_method() const {
    BerMethod m;
    if (method == "ofdm") {
      m.kind = BerMethod::Kind::plain_ofdm;
    } else if (method == "plpoi") {
      m.kind = BerMethod::Kind::plpoi;
      m.solver.theta = theta;
      m.solver.alpha = std::pow(10.0, alpha_db / 10.0);
      m.solver.rho = rho;
      m.solver.max_iters = max_iters;
      m.solver.residual_tol = residual_tol;
    } else if (method == "baseline") {
      m.kind = BerMethod::Kind::baseline;
      m.weight = w;
      m.radar_root = radar_root;
    } else {
      throw std::invalid_argument("BerConfig: unknown method");
    }
    return m;
  }

  ChannelKind channel_kind() const {
    if (channel == "awgn") return ChannelKind::awgn;
    if (channel == "rayleigh") return ChannelKind::rayleigh;
    throw std::invalid_argument("BerConfig: unknown channel");
  }

  MetaList meta() const {
    std::string grid;
    for (std::size_t i = 0; i < ebn0_db.size(); ++i) {
      if (i) grid += ',';
      grid += format_g17(ebn0_db[i]);
    }
    return {{"method", method},       {"channel", channel},
            {"ebn0_db", grid},        {"n", std::to_string(n)},
            {"trials", std::to_string(trials)}, {"seed", std::to_string(seed)},
            {"theta", format_g17(theta)},       {"alpha_db", format_g17(alpha_db)},
            {"rho", format_g17(rho)},           {"max_iters", std::to_string(max_iters)},
            {"residual_tol", format_g17(residual_tol)}, {"w", format_g17(w)},
            {"radar_root", std::to_string(radar_root)}};
  }
};

struct BerOutputs {
  std::vector<BerPoint> points;
  std::vector<int> non_monotone_rows;  // flagged, not failed
};

inline BerOutputs run_ber(const BerConfig& config, const std::filesystem::path& out_dir) {
  BerOutputs out;
  out.points = ber_montecarlo(config.ber_method(), config.channel_kind(), config.ebn0_db,
                              config.trials, config.seed, config.n);
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    if (out.points[i].ber > out.points[i - 1].ber) out.non_monotone_rows.push_back(static_cast<int>(i));
  }

  RunWriter writer(out_dir, "ber", config.meta());

  Csv ber = writer.make_csv();
  ber.columns({"method", "channel", "ebn0_db", "trials", "bit_errors", "ber"});
  for (const BerPoint& p : out.points) {
    ber.row()
        .cell(config.method)
        .cell(config.channel)
        .cell(p.ebn0_db)
        .cell(p.trials)
        .cell(p.errors)
        .cell(p.ber);
  }
  writer.add_csv("ber.csv", ber);

  Csv theory = writer.make_csv();
  theory.columns({"channel", "ebn0_db", "ber_theory"});
  for (const BerPoint& p : out.points) {
    const double t = config.channel == "awgn" ? qpsk_ber_awgn(p.ebn0_db) : qpsk_ber_rayleigh(p.ebn0_db);
    theory.row().cell(config.channel).cell(p.ebn0_db).cell(t);
  }
  writer.add_csv("theory.csv", theory);

  Csv summary = writer.make_csv();
  summary.columns({"non_monotone_rows"});
  std::string flagged;
  for (std::size_t i = 0; i < out.non_monotone_rows.size(); ++i) {
    if (i) flagged += ';';
    flagged += std::to_string(out.non_monotone_rows[i]);
  }
  summary.row().cell(flagged.empty() ? std::string("none") : flagged);
  writer.add_csv("summary.csv", summary);

  writer.commit();
  return out;
}

// ---------------------------------------------------------------------------
// af (ambiguity function)
// ---------------------------------------------------------------------------

struct AfConfig {
  int n = 1024;
  uint64_t seed = 1;
  double theta = 0.6;
  double alpha_db = 1.8;
  double rho = 1e4;
  int max_iters = 150;
  double residual_tol = 1e-6;
  int max_delay = 64;     // delay bins exported to the map
  int doppler_span = 16;  // Doppler bins +-span exported to the map
  RadarParams radar{};

  MetaList meta() const {
    return {{"n", std::to_string(n)},
            {"seed", std::to_string(seed)},
            {"theta", format_g17(theta)},
            {"alpha_db", format_g17(alpha_db)},
            {"rho", format_g17(rho)},
            {"max_iters", std::to_string(max_iters)},
            {"residual_tol", format_g17(residual_tol)},
            {"max_delay", std::to_string(max_delay)},
            {"doppler_span", std::to_string(doppler_span)}};
  }
};

struct AfOutputs {
  double zero_doppler_psl_db = 0.0;  // periodic autocorrelation sidelobes
  double zero_delay_psl_db = 0.0;    // envelope (Doppler) cut sidelobes
};

inline AfOutputs run_af(const AfConfig& config, const std::filesystem::path& out_dir) {
  pdwave::detail::require(config.max_delay >= 2 && config.max_delay <= config.n,
                          "run_af: max_delay out of range");
  pdwave::detail::require(config.doppler_span >= 1 && 2 * config.doppler_span < config.n,
                          "run_af: doppler_span out of range");

  Philox rng(config.seed, hdetail::stream_id(pdwave::detail::kStreamBits, 0, 0));
  const InfoSpectrum c = modulate_qpsk(random_bits(2 * static_cast<std::size_t>(config.n), rng));
  SolverConfig solver_cfg;
  solver_cfg.theta = config.theta;
  solver_cfg.alpha = std::pow(10.0, config.alpha_db / 10.0);
  solver_cfg.rho = config.rho;
  solver_cfg.max_iters = config.max_iters;
  solver_cfg.residual_tol = config.residual_tol;
  const DesignResult design = solve(c, solver_cfg);

  // critically-sampled signal: delay bins equal one range resolution cell
  const TransformPlan plan(config.n, 1);
  const cvec s = synthesize_time(design.spectrum.values, plan);

  std::vector<int> all_delays(config.n);
  for (int i = 0; i < config.n; ++i) all_delays[i] = i;
  std::vector<int> zero = {0};
  const AmbiguityGrid pac = ambiguity(s, all_delays, zero);

  std::vector<int> all_dopplers(config.n);
  for (int i = 0; i < config.n; ++i) all_dopplers[i] = i;
  const AmbiguityGrid envelope = ambiguity(s, zero, all_dopplers);

  AfOutputs out;
  out.zero_doppler_psl_db = zero_cut_psl_db(pac, CutAxis::delay);
  out.zero_delay_psl_db = zero_cut_psl_db(envelope, CutAxis::doppler);

  RunWriter writer(out_dir, "af", config.meta());
  const RadarParams& rp = config.radar;
  const double vel_per_bin = rp.wavelength_m() * rp.subcarrier_spacing_hz / 2.0;

  std::vector<int> delays(config.max_delay);
  for (int i = 0; i < config.max_delay; ++i) delays[i] = i;
  std::vector<int> dopplers;
  for (int f = -config.doppler_span; f <= config.doppler_span; ++f) {
    dopplers.push_back((f + config.n) % config.n);
  }
  const AmbiguityGrid grid = ambiguity(s, delays, dopplers);
  const double peak = std::abs(pac.at(0, 0));

  Csv map = writer.make_csv();
  map.columns({"delay_bin", "doppler_bin", "range_m", "velocity_mps", "magnitude_db"});
  for (std::size_t di = 0; di < grid.delays.size(); ++di) {
    for (std::size_t fi = 0; fi < grid.dopplers.size(); ++fi) {
      const int f = grid.dopplers[fi];
      const int signed_f = f < config.n - f ? f : f - config.n;
      const double mag = std::abs(grid.at(di, fi));
      map.row()
          .cell(grid.delays[di])
          .cell(signed_f)
          .cell(grid.delays[di] * rp.range_resolution_m())
          .cell(signed_f * vel_per_bin)
          .cell(20.0 * std::log10(std::max(mag, 1e-300) / peak));
    }
  }
  writer.add_csv("af.csv", map);

  Csv cuts = writer.make_csv();
  cuts.columns({"axis", "bin", "magnitude_db"});
  for (int i = 0; i < config.n; ++i) {
    const double mag = std::abs(pac.at(i, 0));
    cuts.row().cell(std::string("delay")).cell(i).cell(20.0 * std::log10(std::max(mag, 1e-300) / peak));
  }
  for (int i = 0; i < config.n; ++i) {
    const double mag = std::abs(envelope.at(0, i));
    cuts.row().cell(std::string("doppler")).cell(i).cell(20.0 * std::log10(std::max(mag, 1e-300) / peak));
  }
  writer.add_csv("cuts.csv", cuts);

  Csv summary = writer.make_csv();
  summary.columns({"zero_doppler_psl_db", "zero_delay_psl_db", "design_papr_db"});
  summary.row()
      .cell(out.zero_doppler_psl_db)
      .cell(out.zero_delay_psl_db)
      .cell(papr_db(design.time_waveform));
  writer.add_csv("summary.csv", summary);

  writer.commit();
  return out;
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectConfig {
  RadarParams radar{};
  std::vector<TargetSpec> targets = {{30.0, 10.0, cplx(1.0, 0.0)}, {34.0, 15.0, cplx(0.8, 0.0)}};
  double snr_db = 10.0;  // clean-echo power over noise power, per sample
  uint64_t seed = 1;
  double theta = 0.6;
  double alpha_db = 1.8;
  double rho = 1e4;
  int max_iters = 150;
  double residual_tol = 1e-6;
  int peaks = 2;
  bool dump_map_csv = false;

  MetaList meta() const {
    std::string tg;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (i) tg += ';';
      tg += format_g17(targets[i].range_m) + ":" + format_g17(targets[i].velocity_mps) + ":" +
            format_g17(std::abs(targets[i].amplitude));
    }
    return {{"n", std::to_string(radar.n_subcarriers)},
            {"frame_symbols", std::to_string(radar.frame_symbols)},
            {"targets", tg},
            {"snr_db", format_g17(snr_db)},
            {"seed", std::to_string(seed)},
            {"theta", format_g17(theta)},
            {"alpha_db", format_g17(alpha_db)},
            {"rho", format_g17(rho)},
            {"max_iters", std::to_string(max_iters)},
            {"residual_tol", format_g17(residual_tol)},
            {"peaks", std::to_string(peaks)}};
  }
};

struct DetectOutputs {
  std::vector<Detection> detections;
  RangeDopplerMap map;
  double peak_over_median_db = 0.0;
};

/// Designs one spectrum per frame symbol, synthesizes the multi-target frame
/// echo at the requested SNR, and extracts the strongest peaks from the
/// range-Doppler map.
inline DetectOutputs run_detect(const DetectConfig& config, const std::filesystem::path& out_dir,
                                bool write_files = true) {
  const RadarParams& rp = config.radar;
  const int g = rp.frame_symbols;
  pdwave::detail::require(g >= 2, "run_detect: frame must have at least 2 symbols");

  SolverConfig solver_cfg;
  solver_cfg.theta = config.theta;
  solver_cfg.alpha = std::pow(10.0, config.alpha_db / 10.0);
  solver_cfg.rho = config.rho;
  solver_cfg.max_iters = config.max_iters;
  solver_cfg.residual_tol = config.residual_tol;
  solver_cfg.validate();

  std::vector<cvec> spectra(g);
  pdwave::detail::parallel_for(g, [&](int i) {
    Philox rng(config.seed, hdetail::stream_id(pdwave::detail::kStreamBits, 0, i));
    const InfoSpectrum c =
        modulate_qpsk(random_bits(2 * static_cast<std::size_t>(rp.n_subcarriers), rng));
    spectra[i] = solve(c, solver_cfg).spectrum.values;
  });

  // clean echoes first to calibrate the noise level against echo power
  std::vector<cvec> echoes(g);
  Philox unused(0);
  double signal_power = 0.0;
  for (int i = 0; i < g; ++i) {
    echoes[i] = synth_echo(spectra[i], config.targets, rp, 0.0, unused, i);
    signal_power += pdwave::detail::energy(echoes[i]);
  }
  signal_power /= static_cast<double>(g) * rp.n_subcarriers;
  const double noise_var = signal_power * std::pow(10.0, -config.snr_db / 10.0);
  if (noise_var > 0.0) {
    for (int i = 0; i < g; ++i) {
      Philox rng(config.seed, hdetail::stream_id(pdwave::detail::kStreamNoise, 0, i));
      for (cplx& v : echoes[i]) v += rng.next_cgaussian(noise_var);
    }
  }

  DetectOutputs out;
  out.map = range_doppler(echoes, spectra, rp);
  out.detections = detect_peaks(out.map, config.peaks);

  std::vector<double> mags = out.map.magnitude;
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  const double median = mags[mags.size() / 2];
  if (!out.detections.empty() && median > 0.0) {
    out.peak_over_median_db = 20.0 * std::log10(out.detections.front().magnitude / median);
  }

  if (!write_files) return out;

  RunWriter writer(out_dir, "detect", config.meta());

  Csv det = writer.make_csv();
  det.columns({"range_m", "velocity_mps", "magnitude_db"});
  for (const Detection& d : out.detections) {
    det.row().cell(d.range_m).cell(d.velocity_mps).cell(
        20.0 * std::log10(std::max(d.magnitude, 1e-300) / std::max(median, 1e-300)));
  }
  writer.add_csv("detections.csv", det);

  if (config.dump_map_csv) {
    Csv map = writer.make_csv();
    map.columns({"delay_bin", "doppler_bin", "range_m", "velocity_mps", "magnitude_db"});
    for (int k = 0; k < out.map.n_delay; ++k) {
      for (int d = 0; d < out.map.n_doppler; ++d) {
        const int signed_d = d < out.map.n_doppler - d ? d : d - out.map.n_doppler;
        map.row()
            .cell(k)
            .cell(signed_d)
            .cell(k * out.map.range_resolution_m)
            .cell(signed_d * out.map.velocity_resolution_mps)
            .cell(20.0 * std::log10(std::max(out.map.at(k, d), 1e-300)));
      }
    }
    writer.add_csv("map.csv", map);
  }

  // raw grid: one text header line, then row-major float64 magnitudes
  std::string header = "pdwave-rdmap n=" + std::to_string(out.map.n_delay) +
                       " g=" + std::to_string(out.map.n_doppler) +
                       " range_res_m=" + format_g17(out.map.range_resolution_m) +
                       " vel_res_mps=" + format_g17(out.map.velocity_resolution_mps) + "\n";
  std::string blob = header;
  blob.resize(header.size() + out.map.magnitude.size() * sizeof(double));
  std::memcpy(blob.data() + header.size(), out.map.magnitude.data(),
              out.map.magnitude.size() * sizeof(double));
  writer.add("map.bin", std::move(blob));

  writer.commit();
  return out;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepConfig {
  std::vector<double> theta_grid = {0.3, 0.4, 0.5, 0.6, 0.7};
  std::vector<double> w_grid = {0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.65, 0.8, 1.0};
  int n = 1024;
  int trials = 50;
  uint64_t seed = 1;
  double alpha_db = 1.8;
  double rho = 1e4;
  int max_iters = 150;
  double residual_tol = 1e-6;
  int radar_root = 1;

  MetaList meta() const {
    auto join = [](const std::vector<double>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_g17(v[i]);
      }
      return s;
    };
    return {{"theta_grid", join(theta_grid)},
            {"w_grid", join(w_grid)},
            {"n", std::to_string(n)},
            {"trials", std::to_string(trials)},
            {"seed", std::to_string(seed)},
            {"alpha_db", format_g17(alpha_db)},
            {"rho", format_g17(rho)},
            {"max_iters", std::to_string(max_iters)},
            {"residual_tol", format_g17(residual_tol)},
            {"radar_root", std::to_string(radar_root)}};
  }
};

struct SweepOutputs {
  std::vector<std::pair<double, double>> theta_mean_papr;  // (theta, mean dB)
  std::vector<std::pair<double, double>> w_mean_papr;      // (w, mean dB)
  std::vector<std::pair<double, double>> pairs;            // (theta, equivalent w)
};

/// Mean PAPR per parameter value for both designers over a shared payload
/// set, plus the (theta, w) pairs with equal mean PAPR by linear
/// interpolation along the w curve.
inline SweepOutputs run_sweep(const SweepConfig& config, const std::filesystem::path& out_dir) {
  pdwave::detail::require(!config.theta_grid.empty() && !config.w_grid.empty(),
                          "run_sweep: empty grids");
  pdwave::detail::require(config.trials >= 1, "run_sweep: trials must be >= 1");

  const TransformPlan plan(config.n, 4);
  std::vector<InfoSpectrum> payloads(config.trials);
  for (int t = 0; t < config.trials; ++t) {
    Philox rng(config.seed, hdetail::stream_id(pdwave::detail::kStreamBits, 0, t));
    payloads[t] = modulate_qpsk(random_bits(2 * static_cast<std::size_t>(config.n), rng));
  }

  SweepOutputs out;
  const cvec x0 = radar_reference(config.n, config.radar_root);
  for (double w : config.w_grid) {
    BaselineWeights weights{w, x0};
    double acc = 0.0;
    for (const InfoSpectrum& c : payloads) {
      acc += papr_db(synthesize_time(baseline_design(c, weights), plan));
    }
    out.w_mean_papr.emplace_back(w, acc / config.trials);
  }

  for (double theta : config.theta_grid) {
    SolverConfig solver_cfg;
    solver_cfg.theta = theta;
    solver_cfg.alpha = std::pow(10.0, config.alpha_db / 10.0);
    solver_cfg.rho = config.rho;
    solver_cfg.max_iters = config.max_iters;
    solver_cfg.residual_tol = config.residual_tol;
    std::vector<double> vals(config.trials);
    pdwave::detail::parallel_for(config.trials, [&](int t) {
      vals[t] = papr_db(solve(payloads[t], solver_cfg).time_waveform);
    });
    double acc = 0.0;
    for (double v : vals) acc += v;
    out.theta_mean_papr.emplace_back(theta, acc / config.trials);
  }

  // equal-mean crossings along the (increasing-in-w) baseline curve
  for (const auto& [theta, target] : out.theta_mean_papr) {
    for (std::size_t i = 1; i < out.w_mean_papr.size(); ++i) {
      const auto [w_lo, p_lo] = out.w_mean_papr[i - 1];
      const auto [w_hi, p_hi] = out.w_mean_papr[i];
      const bool brackets = (p_lo <= target && target <= p_hi) || (p_hi <= target && target <= p_lo);
      if (brackets && p_lo != p_hi) {
        out.pairs.emplace_back(theta, w_lo + (target - p_lo) * (w_hi - w_lo) / (p_hi - p_lo));
        break;
      }
    }
  }

  RunWriter writer(out_dir, "sweep", config.meta());

  Csv sweep = writer.make_csv();
  sweep.columns({"method", "param", "mean_papr_db"});
  for (const auto& [theta, p] : out.theta_mean_papr) {
    sweep.row().cell(std::string("plpoi")).cell(theta).cell(p);
  }
  for (const auto& [w, p] : out.w_mean_papr) {
    sweep.row().cell(std::string("baseline")).cell(w).cell(p);
  }
  writer.add_csv("sweep.csv", sweep);

  Csv pairs = writer.make_csv();
  pairs.columns({"theta", "w_equivalent"});
  for (const auto& [theta, w] : out.pairs) pairs.row().cell(theta).cell(w);
  writer.add_csv("pairs.csv", pairs);

  writer.commit();
  return out;
}

}  // namespace pdwave::harness

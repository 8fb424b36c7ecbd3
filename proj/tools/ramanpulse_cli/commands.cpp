#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "ramanpulse.h"
#include "wavefile.hpp"

namespace cli {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct WaveformDeleter {
  void operator()(rp_waveform* w) const { rp_waveform_free(w); }
};
using WaveformPtr = std::unique_ptr<rp_waveform, WaveformDeleter>;

struct EnsembleDeleter {
  void operator()(rp_ensemble* e) const { rp_ensemble_free(e); }
};
using EnsemblePtr = std::unique_ptr<rp_ensemble, EnsembleDeleter>;

struct ReportDeleter {
  void operator()(rp_report* r) const { rp_report_free(r); }
};
using ReportPtr = std::unique_ptr<rp_report, ReportDeleter>;

// Config-derived parameters: a rejected value is a configuration mistake.
void check(rp_status s, const std::string& what) {
  if (s == RP_OK) return;
  const std::string msg = what + ": " + rp_last_error();
  if (s == RP_EINVAL) throw ConfigError(msg);
  throw RunError(msg);
}

// File-derived data: a rejected value is a content problem, not a config one.
void check_run(rp_status s, const std::string& what) {
  if (s == RP_OK) return;
  throw RunError(what + ": " + std::string(rp_last_error()));
}

int as_int(const std::string& key, long long v) {
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max())
    throw ConfigError("key '" + key + "': value out of range");
  return static_cast<int>(v);
}

Config load_config(const CommonArgs& args) {
  if (args.config) return Config::load(*args.config, args.overrides);
  return Config::from_overrides(args.overrides);
}

struct LoadedWave {
  WaveFile file;
  WaveformPtr handle;
};

LoadedWave load_waveform(const std::string& path) {
  LoadedWave out;
  out.file = read_wavefile(path);
  rp_waveform* w = nullptr;
  const rp_status s =
      rp_waveform_create(out.file.phases.data(), out.file.phases.size(),
                         out.file.dt, kTwoPi * out.file.rabi_frequency_hz, &w);
  if (s != RP_OK)
    throw RunError("waveform file '" + path + "': " + rp_last_error());
  out.handle.reset(w);
  return out;
}

WaveFile to_wavefile(const rp_waveform* w) {
  WaveFile out;
  out.phases.resize(rp_waveform_size(w));
  check_run(rp_waveform_phases(w, out.phases.data(), out.phases.size()),
            "waveform readback");
  out.dt = rp_waveform_dt(w);
  out.rabi_frequency_hz = rp_waveform_omega(w) / kTwoPi;
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("failed while writing '" + path + "'");
}

// Thermal ensemble shared by optimize and the sequence commands. Zero
// temperature or zero coupling spread collapses the matching grid axis.
EnsemblePtr thermal_ensemble(Config& cfg, int default_deltas,
                             int default_scales) {
  const double temperature = cfg.get_temperature_k("temperature", 0.0);
  const double spread = cfg.get_fraction("rabi_spread", 0.0);
  const int nd = as_int(
      "ensemble_deltas",
      cfg.get_int("ensemble_deltas", temperature > 0.0 ? default_deltas : 1));
  const int ns = as_int(
      "ensemble_scales",
      cfg.get_int("ensemble_scales", spread > 0.0 ? default_scales : 1));
  rp_ensemble* e = nullptr;
  check(rp_ensemble_thermal(temperature, spread, nd, ns, &e), "ensemble");
  return EnsemblePtr(e);
}

std::vector<double> linspace(const std::string& steps_key, double lo,
                             double hi, long long steps) {
  if (steps < 1)
    throw ConfigError("key '" + steps_key + "': must be >= 1");
  if (steps == 1) {
    if (lo != hi)
      throw ConfigError("key '" + steps_key +
                        "': a 1-step scan needs equal endpoints");
    return {lo};
  }
  std::vector<double> v(static_cast<size_t>(steps));
  for (long long i = 0; i < steps; ++i)
    v[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) /
                                         static_cast<double>(steps - 1);
  return v;
}

double resolve_seconds(const TimeValue& t, double rabi_hz) {
  // one pi-pulse time is 1 / (2 * cyclic Rabi frequency)
  return t.tpi ? t.value / (2.0 * rabi_hz) : t.value;
}

// pulse1/pulse2/pulse3 of a Mach-Zehnder sequence; pulse3 defaults to the
// literal "flip-reverse", deriving the final splitter from pulse1.
struct SequencePulses {
  LoadedWave p1, p2;
  WaveformPtr p3;
  std::vector<const rp_waveform*> ptrs;
};

SequencePulses load_sequence(Config& cfg) {
  SequencePulses s;
  s.p1 = load_waveform(cfg.get_string("pulse1"));
  s.p2 = load_waveform(cfg.get_string("pulse2"));
  const std::string third =
      cfg.get_string("pulse3", std::string("flip-reverse"));
  if (third == "flip-reverse") {
    rp_waveform* fr = nullptr;
    check_run(rp_waveform_flip_reverse(s.p1.handle.get(), &fr),
              "flip-reverse of pulse1");
    s.p3.reset(fr);
  } else {
    s.p3 = std::move(load_waveform(third).handle);
  }
  s.ptrs = {s.p1.handle.get(), s.p2.handle.get(), s.p3.get()};
  return s;
}

}  // namespace

void cmd_optimize(const CommonArgs& args) {
  Config cfg = load_config(args);
  rp_optimize_params p;
  rp_optimize_params_init(&p);

  const double rabi_hz = cfg.get_frequency_hz("rabi_frequency");
  p.omega_nominal = kTwoPi * rabi_hz;
  p.n_steps = as_int("n_steps", cfg.get_int("n_steps", p.n_steps));
  const TimeValue duration =
      cfg.get_time("duration", TimeValue{p.duration_tpi, true});
  p.duration_tpi =
      duration.tpi ? duration.value : duration.value * 2.0 * rabi_hz;

  const std::string kind = cfg.get_enum(
      "fidelity", {"inversion", "beamsplitter", "ur180"},
      std::string("inversion"));
  p.fidelity_kind = kind == "inversion"
                        ? RP_FIDELITY_INVERSION
                        : (kind == "beamsplitter" ? RP_FIDELITY_BEAMSPLITTER
                                                  : RP_FIDELITY_UR180);
  p.target_axis_phase =
      cfg.get_angle_rad("target_axis_phase", p.target_axis_phase);
  p.smoothness_weight =
      cfg.get_double("smoothness_weight", p.smoothness_weight);
  p.antisymmetric =
      cfg.get_bool("antisymmetric", p.antisymmetric != 0) ? 1 : 0;

  const std::string init = cfg.get_enum(
      "init", {"constant", "random", "waveform"}, std::string("random"));
  LoadedWave init_wave;
  if (init == "constant") {
    p.init_kind = RP_INIT_CONSTANT;
    p.init_constant_phase =
        cfg.get_angle_rad("init_phase", p.init_constant_phase);
  } else if (init == "random") {
    p.init_kind = RP_INIT_RANDOM_SMOOTH;
    p.init_amplitude = cfg.get_double("init_amplitude", p.init_amplitude);
    p.init_correlation =
        cfg.get_double("init_correlation", p.init_correlation);
  } else {
    p.init_kind = RP_INIT_WAVEFORM;
    init_wave = load_waveform(cfg.get_string("init_file"));
    p.init_waveform = init_wave.handle.get();
  }

  p.max_iters = as_int("max_iters", cfg.get_int("max_iters", p.max_iters));
  p.target_fidelity = cfg.get_double("target_fidelity", p.target_fidelity);
  p.grad_tol = cfg.get_double("grad_tol", p.grad_tol);
  p.seed = cfg.get_seed("seed", 0);
  p.n_starts = as_int("starts", cfg.get_int("starts", p.n_starts));

  EnsemblePtr ens = thermal_ensemble(cfg, 31, 7);
  cfg.reject_unknown_keys();

  rp_report* rep_raw = nullptr;
  check(rp_optimize(&p, ens.get(), &rep_raw), "optimize");
  ReportPtr rep(rep_raw);

  rp_waveform* w_raw = nullptr;
  check_run(rp_report_waveform(rep.get(), &w_raw), "optimize result");
  WaveformPtr wave(w_raw);

  const double fidelity = rp_report_fidelity(rep.get());
  const double penalty = rp_report_penalty(rep.get());
  const double total = rp_report_total(rep.get());
  const int iterations = rp_report_iterations(rep.get());
  const std::string termination = rp_report_termination(rep.get());

  WaveFile out = to_wavefile(wave.get());
  out.metadata = {
      {"seed", std::to_string(p.seed)},
      {"starts", std::to_string(p.n_starts)},
      {"fidelity", fmt(fidelity)},
      {"penalty", fmt(penalty)},
      {"total", fmt(total)},
      {"iterations", std::to_string(iterations)},
      {"termination", termination},
  };
  write_wavefile(args.output, out);

  const std::string report_path =
      args.report ? *args.report : args.output + ".report";
  const size_t trace_n = rp_report_trace_size(rep.get());
  std::vector<double> tr_f(trace_n), tr_t(trace_n), tr_g(trace_n);
  if (trace_n > 0)
    check_run(rp_report_trace(rep.get(), tr_f.data(), tr_t.data(),
                              tr_g.data(), trace_n),
              "trace readback");

  std::ostringstream rout;
  rout << "# ramanpulse optimize report\n";
  rout << "fidelity = " << fmt(fidelity) << "\n";
  rout << "penalty = " << fmt(penalty) << "\n";
  rout << "total = " << fmt(total) << "\n";
  rout << "iterations = " << iterations << "\n";
  rout << "termination = " << termination << "\n";
  rout << "seed = " << std::to_string(p.seed) << "\n";
  rout << "starts = " << p.n_starts << "\n";
  rout << "# columns: iter fidelity total grad_norm\n";
  for (size_t i = 0; i < trace_n; ++i)
    rout << i << "\t" << fmt(tr_f[i]) << "\t" << fmt(tr_t[i]) << "\t"
         << fmt(tr_g[i]) << "\n";
  write_text_file(report_path, rout.str());

  std::cout << "fidelity = " << fmt(fidelity) << "\n"
            << "penalty = " << fmt(penalty) << "\n"
            << "total = " << fmt(total) << "\n"
            << "iterations = " << iterations << "\n"
            << "termination = " << termination << "\n"
            << "wrote " << args.output << "\n"
            << "wrote " << report_path << "\n";
}

void cmd_export_waveform(const CommonArgs& args) {
  Config cfg = load_config(args);
  const std::string kind =
      cfg.get_enum("kind", {"rect", "waltz", "flip-reverse", "retune"});
  WaveformPtr w;
  if (kind == "rect") {
    const double area = cfg.get_angle_rad("area");
    const double phase = cfg.get_angle_rad("phase", 0.0);
    const double rabi_hz = cfg.get_frequency_hz("rabi_frequency");
    rp_waveform* raw = nullptr;
    check(rp_waveform_rect(area, phase, kTwoPi * rabi_hz, &raw),
          "rect waveform");
    w.reset(raw);
  } else if (kind == "waltz") {
    const double rabi_hz = cfg.get_frequency_hz("rabi_frequency");
    rp_waveform* raw = nullptr;
    check(rp_waveform_waltz(kTwoPi * rabi_hz, &raw), "waltz waveform");
    w.reset(raw);
  } else if (kind == "flip-reverse") {
    const LoadedWave in = load_waveform(cfg.get_string("input"));
    rp_waveform* raw = nullptr;
    check_run(rp_waveform_flip_reverse(in.handle.get(), &raw), "flip-reverse");
    w.reset(raw);
  } else {  // retune
    const LoadedWave in = load_waveform(cfg.get_string("input"));
    const double rabi_hz = cfg.get_frequency_hz("rabi_frequency");
    rp_waveform* raw = nullptr;
    check(rp_waveform_retune(in.handle.get(), kTwoPi * rabi_hz, &raw),
          "retune");
    w.reset(raw);
  }
  cfg.reject_unknown_keys();

  WaveFile out = to_wavefile(w.get());
  out.metadata.emplace_back("kind", kind);
  write_wavefile(args.output, out);
  std::cout << "n = " << out.phases.size() << "\n"
            << "wrote " << args.output << "\n";
}

void cmd_fringe_scan(const CommonArgs& args) {
  Config cfg = load_config(args);
  SequencePulses seq = load_sequence(cfg);
  const double rabi_hz =
      cfg.get_frequency_hz("rabi_frequency", seq.p1.file.rabi_frequency_hz);
  const double dwell =
      resolve_seconds(cfg.get_time("dwell", TimeValue{100e-6, false}), rabi_hz);
  const double inertial = cfg.get_angle_rad("inertial_phase", 0.0);
  const bool dwell_det = cfg.get_bool("dwell_detuning", true);
  const int n_phi = as_int("n_phi", cfg.get_int("n_phi", 64));
  EnsemblePtr ens = thermal_ensemble(cfg, 61, 11);
  cfg.reject_unknown_keys();

  std::vector<double> phi(static_cast<size_t>(n_phi > 0 ? n_phi : 0));
  std::vector<double> pe(phi.size());
  check(rp_fringe_scan(seq.ptrs.data(), seq.ptrs.size(), dwell, inertial,
                       dwell_det ? 1 : 0, ens.get(), kTwoPi * rabi_hz, n_phi,
                       phi.data(), pe.data()),
        "fringe scan");

  double offset = 0.0, contrast = 0.0, phase = 0.0, resid = 0.0;
  check_run(rp_fit_fringe(phi.data(), pe.data(), phi.size(), &offset,
                          &contrast, &phase, &resid),
            "fringe fit");

  std::ostringstream out;
  out << "# ramanpulse fringe-scan\n";
  out << "# offset = " << fmt(offset) << "\n";
  out << "# contrast = " << fmt(contrast) << "\n";
  out << "# phase_rad = " << fmt(phase) << "\n";
  out << "# residual_rms = " << fmt(resid) << "\n";
  out << "phi_bs_rad\tpe\n";
  for (size_t i = 0; i < phi.size(); ++i)
    out << fmt(phi[i]) << "\t" << fmt(pe[i]) << "\n";
  write_text_file(args.output, out.str());

  std::cout << "offset = " << fmt(offset) << "\n"
            << "contrast = " << fmt(contrast) << "\n"
            << "phase_rad = " << fmt(phase) << "\n"
            << "residual_rms = " << fmt(resid) << "\n"
            << "wrote " << args.output << "\n";
}

void cmd_spectral_scan(const CommonArgs& args) {
  Config cfg = load_config(args);
  const LoadedWave pulse = load_waveform(cfg.get_string("pulse"));
  const double temperature = cfg.get_temperature_k("temperature");
  const double spread = cfg.get_fraction("rabi_spread", 0.0);
  const double flo = cfg.get_frequency_hz("detuning_min");
  const double fhi = cfg.get_frequency_hz("detuning_max");
  const long long steps = cfg.get_int("detuning_steps", 101);
  const int nd = as_int("ensemble_deltas", cfg.get_int("ensemble_deltas", 61));
  const int ns = as_int("ensemble_scales", cfg.get_int("ensemble_scales", 11));
  const double span = cfg.get_double("ensemble_span", 3.0);
  cfg.reject_unknown_keys();

  const std::vector<double> freqs = linspace("detuning_steps", flo, fhi, steps);
  std::vector<double> detunings(freqs.size());
  for (size_t i = 0; i < freqs.size(); ++i) detunings[i] = kTwoPi * freqs[i];
  std::vector<double> transfer(freqs.size());
  check(rp_spectral_scan(pulse.handle.get(), temperature, spread,
                         detunings.data(), detunings.size(), nd, ns, span,
                         transfer.data()),
        "spectral scan");

  double peak = 0.0;
  for (const double t : transfer) peak = std::max(peak, t);

  std::ostringstream out;
  out << "# ramanpulse spectral-scan\n";
  out << "detuning_hz\ttransfer\n";
  for (size_t i = 0; i < freqs.size(); ++i)
    out << fmt(freqs[i]) << "\t" << fmt(transfer[i]) << "\n";
  write_text_file(args.output, out.str());

  std::cout << "peak_transfer = " << fmt(peak) << "\n"
            << "wrote " << args.output << "\n";
}

void cmd_temporal_scan(const CommonArgs& args) {
  Config cfg = load_config(args);
  const LoadedWave pulse = load_waveform(cfg.get_string("pulse"));
  const double rabi_hz = pulse.file.rabi_frequency_hz;
  const double temperature = cfg.get_temperature_k("temperature");
  const double spread = cfg.get_fraction("rabi_spread", 0.0);
  const double tlo =
      resolve_seconds(cfg.get_time("time_min", TimeValue{0.0, false}), rabi_hz);
  const double thi = resolve_seconds(cfg.get_time("time_max"), rabi_hz);
  const long long steps = cfg.get_int("time_steps", 201);
  const int nd = as_int("ensemble_deltas", cfg.get_int("ensemble_deltas", 61));
  const int ns = as_int("ensemble_scales", cfg.get_int("ensemble_scales", 11));
  const double span = cfg.get_double("ensemble_span", 3.0);
  cfg.reject_unknown_keys();

  const std::vector<double> taus = linspace("time_steps", tlo, thi, steps);
  std::vector<double> pe(taus.size());
  check(rp_temporal_scan(pulse.handle.get(), temperature, spread, taus.data(),
                         taus.size(), nd, ns, span, pe.data()),
        "temporal scan");

  std::ostringstream out;
  out << "# ramanpulse temporal-scan\n";
  out << "time_s\tpe\n";
  for (size_t i = 0; i < taus.size(); ++i)
    out << fmt(taus[i]) << "\t" << fmt(pe[i]) << "\n";
  write_text_file(args.output, out.str());

  std::cout << "final_pe = " << fmt(pe.empty() ? 0.0 : pe.back()) << "\n"
            << "wrote " << args.output << "\n";
}

void cmd_contrast_map(const CommonArgs& args) {
  Config cfg = load_config(args);
  SequencePulses seq = load_sequence(cfg);
  const double rabi_hz =
      cfg.get_frequency_hz("rabi_frequency", seq.p1.file.rabi_frequency_hz);
  const double dwell =
      resolve_seconds(cfg.get_time("dwell", TimeValue{0.0, false}), rabi_hz);
  const bool dwell_det = cfg.get_bool("dwell_detuning", false);
  const int n_phi = as_int("n_phi", cfg.get_int("n_phi", 32));
  const double dlo = cfg.get_double("delta_min", -1.0);
  const double dhi = cfg.get_double("delta_max", 1.0);
  const long long dsteps = cfg.get_int("delta_steps", 41);
  const double slo = cfg.get_double("scale_min", 0.8);
  const double shi = cfg.get_double("scale_max", 1.2);
  const long long ssteps = cfg.get_int("scale_steps", 9);
  cfg.reject_unknown_keys();

  const std::vector<double> deltas = linspace("delta_steps", dlo, dhi, dsteps);
  const std::vector<double> scales = linspace("scale_steps", slo, shi, ssteps);
  std::vector<double> map(deltas.size() * scales.size());
  check(rp_contrast_map(seq.ptrs.data(), seq.ptrs.size(), dwell,
                        dwell_det ? 1 : 0, deltas.data(), deltas.size(),
                        scales.data(), scales.size(), n_phi, kTwoPi * rabi_hz,
                        map.data()),
        "contrast map");

  std::ostringstream out;
  out << "# ramanpulse contrast-map\n";
  out << "delta_over_omega\tomega_scale\tcontrast\n";
  for (size_t i = 0; i < deltas.size(); ++i)
    for (size_t j = 0; j < scales.size(); ++j)
      out << fmt(deltas[i]) << "\t" << fmt(scales[j]) << "\t"
          << fmt(map[i * scales.size() + j]) << "\n";
  write_text_file(args.output, out.str());

  std::cout << "rows = " << map.size() << "\n"
            << "wrote " << args.output << "\n";
}

void cmd_verify(const std::string& waveform_path) {
  const LoadedWave wave = load_waveform(waveform_path);
  const double rabi_hz = wave.file.rabi_frequency_hz;
  double defect = 0.0;
  check_run(rp_unitarity_defect(wave.handle.get(), 0.0, kTwoPi * rabi_hz,
                                &defect),
            "unitarity check");
  if (!(defect <= 1e-9))
    throw RunError("waveform file '" + waveform_path +
                   "': propagator unitarity defect " + fmt(defect) +
                   " exceeds 1e-9");

  const size_t n = wave.file.phases.size();
  std::cout << "n = " << n << "\n"
            << "dt_s = " << fmt(wave.file.dt) << "\n"
            << "rabi_frequency_hz = " << fmt(rabi_hz) << "\n"
            << "duration_s = " << fmt(wave.file.dt * static_cast<double>(n))
            << "\n"
            << "unitarity_defect = " << fmt(defect) << "\n"
            << "ok\n";
}

}  // namespace cli

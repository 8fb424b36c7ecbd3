#pragma once

#include <cstdint>
#include <functional>

#include "core/fidelity.hpp"
#include "core/lbfgs.hpp"

namespace rp {

struct InitStrategy {
  enum class Kind { constant, random_smooth, from_file };
  Kind kind = Kind::random_smooth;
  double constant_phase = 0.0;  // constant
  double amplitude = 0.5;       // random_smooth: rms amplitude, rad
  int correlation = 10;         // random_smooth: correlation length, slices
  PulseWaveform waveform;       // from_file: phases must match n_steps
};

struct OptimizeConfig {
  int n_steps = 100;
  double duration_tpi = 7.4;   // total duration in units of t_pi = pi/omega
  double omega_nominal = 0.0;  // rad/s
  ObjectiveSpec objective;
  InitStrategy init;
  int max_iters = 2000;
  double target_fidelity = 0.99;  // penalty-free ensemble fidelity
  double grad_tol = 1e-8;
  int history = 10;
  std::uint64_t seed = 0;
  int n_starts = 5;  // random_smooth restarts (seed, seed+1, ...); best kept
  std::function<void(int iter, const PulseWaveform&)> observer;
};

struct OptimizeReport {
  PulseWaveform waveform;
  double fidelity = 0.0;  // penalty-free ensemble fidelity of `waveform`
  double penalty = 0.0;
  double total = 0.0;
  Termination reason = Termination::iteration_cap;
  std::vector<IterRecord> trace;  // best start's accepted iterates
  int iterations = 0;
  int best_start = 0;
  std::uint64_t seed = 0;
};

// Designs a phase profile by maximizing the ensemble objective with L-BFGS.
// Deterministic: the same config and seed give bit-identical waveforms.
OptimizeReport optimize(const OptimizeConfig& config);

// Zero-mean Gaussian random profile smoothed to the given correlation length
// (in slices) and scaled to the requested rms amplitude. Deterministic in
// the seed across platforms.
std::vector<double> random_smooth_profile(int n, double amplitude_rms,
                                          int correlation, std::uint64_t seed);

}  // namespace rp

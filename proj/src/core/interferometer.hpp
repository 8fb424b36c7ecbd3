#pragma once

#include <vector>

#include "core/dynamics.hpp"
#include "core/ensemble.hpp"

namespace rp {

// Single-slice pulse of the given area (omega * dt) at a constant phase.
PulseWaveform rect_waveform(double area, double phase, double omega);

// Composite inversion pulse: segments of area (pi/2, pi, 3*pi/2) with phases
// (0, pi, 0), represented as six uniform slices of area pi/2 each.
PulseWaveform waltz_waveform(double omega);

// Pulse train with equal dwells in between. The interferometer phase
// `inertial_phase` is injected as a relative z-phase in the final dwell
// (a single injection point keeps the fitted fringe phase exactly linear in
// it for arbitrary pulse shapes). bs_phase_offset is added to every phase of
// the final pulse; scanning it traces out the fringe.
struct PulseSequence {
  std::vector<PulseWaveform> pulses;
  double dwell = 0.0;           // s
  double inertial_phase = 0.0;  // rad
  double bs_phase_offset = 0.0; // rad
  bool dwell_detuning = true;   // accrue delta*tau phase during dwells
};

// Excited-state population after the full sequence starting from |g>.
// For three pulses: P_e = |<e| U3 F U2 F U1 |g>|^2.
double sequence_pe(const PulseSequence& seq, const AtomParams& atom);

struct FringeData {
  std::vector<double> phi;  // bs_phase_offset values, strictly increasing
  std::vector<double> pe;   // ensemble-averaged populations
};

// Ensemble-averaged fringe: n_phi equispaced offsets over [0, 4*pi). Atom
// Rabi frequencies are omega_scale * omega_reference.
FringeData fringe_scan(const PulseSequence& seq, const Ensemble& ensemble,
                       int n_phi, double omega_reference);

// P_e = (offset - contrast * cos(phi + phase)) / 2. offset comes from the
// mean, contrast and phase from the first Fourier quadrature pair at unit
// frequency; exact for equispaced samples covering whole periods.
struct FringeFit {
  double offset = 0.0;
  double contrast = 0.0;
  double phase = 0.0;         // wrapped to (-pi, pi]
  double residual_rms = 0.0;
};

FringeFit fit_fringe(const FringeData& data);

// Interferometer phase contributed by the pulses,
//   arg<e|U1|g> - arg<g|U1|g> - 2 arg<e|U2|g> + arg<g|U3|g> + arg<e|U3|g>,
// wrapped to (-pi, pi]. Degenerate when any matrix element magnitude is
// below 1e-12 (phase undefined).
struct DeltaPhi {
  double value = 0.0;
  bool degenerate = false;
};

DeltaPhi delta_phi(const Mat2& u1, const Mat2& u2, const Mat2& u3);

// Weighted circular mean/stddev of delta_phi across an ensemble; degenerate
// points are excluded (and counted).
struct DeltaPhiStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n_degenerate = 0;
};

DeltaPhiStats delta_phi_ensemble(const PulseWaveform& bs,
                                 const PulseWaveform& mirror,
                                 const PulseWaveform& final_bs,
                                 const Ensemble& ensemble,
                                 double omega_reference);

// Fitted fringe contrast on a grid of systematic offsets: single atom per
// grid point with delta = x * omega_reference and omega = scale *
// omega_reference. Row-major [i_delta * n_scales + j_scale].
std::vector<double> contrast_map(const PulseSequence& seq,
                                 const std::vector<double>& delta_over_omega,
                                 const std::vector<double>& omega_scales,
                                 int n_phi, double omega_reference);

// Quadrature used when scans average over a thermal cloud.
struct ScanQuadrature {
  int n_delta = 61;
  int n_omega = 11;
  double span_sigmas = 3.0;
};

// Thermal-averaged transfer versus laser detuning: each atom sees
// delta_laser + its Doppler detuning. A zero-width axis (T == 0 or
// rabi_halfwidth == 0) collapses to a single quadrature point.
std::vector<double> spectral_scan(const PulseWaveform& w,
                                  const ThermalSpec& spec,
                                  double rabi_halfwidth,
                                  const std::vector<double>& laser_detunings,
                                  const ScanQuadrature& quad = {});

// Thermal-averaged excited population versus pulse truncation time. The
// phase is held at the last slice value beyond the waveform end.
std::vector<double> temporal_scan(const PulseWaveform& w,
                                  const ThermalSpec& spec,
                                  double rabi_halfwidth,
                                  const std::vector<double>& taus,
                                  const ScanQuadrature& quad = {});

}  // namespace rp

#pragma once

#include <vector>

#include "core/su2.hpp"

namespace rp {

// Two-level dynamics of a Raman transition driven by a phase-modulated pulse.
//
// Frame and sign convention, fixed once here; every phase-sensitive result in
// the toolkit refers to it. The basis is ordered (|g>, |e>) and a
// constant-phase slice evolves the state with
//
//   U = exp(-i dt [omega_r cos(phi) sx + omega_r sin(phi) sy + delta sz] / 2),
//
// where sx, sy, sz are the Pauli matrices with sz = diag(+1, -1) on (g, e).
// Written out,
//
//   U = [[ C*, -i S* ],          C = cos(W dt/2) + i (delta/W) sin(W dt/2)
//        [ -i S,  C  ]],         S = e^{i phi} (omega_r/W) sin(W dt/2)
//
// with the generalized Rabi frequency W = sqrt(omega_r^2 + delta^2). A pulse
// is a time-ordered product of slices, U = U_{N-1} ... U_1 U_0.

struct AtomParams {
  double delta = 0.0;    // two-photon detuning, rad/s
  double omega_r = 0.0;  // two-photon Rabi frequency, rad/s; must be > 0
};

// Piecewise-constant phase profile with uniform slice duration. Phases are
// stored unwrapped; wrapping only ever happens at I/Q export.
struct PulseWaveform {
  std::vector<double> phases;  // phi_n, rad
  double dt = 0.0;             // slice duration, s
  double omega_nominal = 0.0;  // design Rabi frequency, rad/s

  double duration() const { return dt * static_cast<double>(phases.size()); }
};

void validate(const AtomParams& atom);
void validate(const PulseWaveform& w);

// Propagator of one constant-phase slice of the Hamiltonian above. dt == 0
// gives identity.
Mat2 step_propagator(double phi, const AtomParams& atom, double dt);

// Time-ordered product over all slices.
Mat2 pulse_propagator(const PulseWaveform& w, const AtomParams& atom);

struct TrajectorySample {
  double t = 0.0;
  State state;
};

// State at every slice boundary (N+1 samples, t = 0 .. duration).
std::vector<TrajectorySample> evolve_trajectory(const PulseWaveform& w,
                                                const AtomParams& atom,
                                                const State& initial);

// Dwell between pulses: diagonal unitary with <g| picking up e^{+i(delta tau
// + extra_phase)/2} and <e| the conjugate. extra_phase injects an
// interferometer phase as a relative z-phase.
Mat2 free_evolution(double delta, double tau, double extra_phase = 0.0);

// Time-reversed, phase-negated partner: phases reversed in order and negated.
// Satisfies pulse_propagator(flip_reverse(w)) == transpose(pulse_propagator(w))
// for every atom.
PulseWaveform flip_reverse(const PulseWaveform& w);

// Same dimensionless profile instantiated at a different Rabi frequency:
// phases unchanged, dt rescaled so omega * dt is preserved per slice.
PulseWaveform retuned(const PulseWaveform& w, double omega_new);

// True iff phi[N-1-n] == -phi[n] exactly for all n (odd middle slice == 0).
bool midpoint_antisymmetric(const PulseWaveform& w);

struct AxisAngle {
  double x = 0.0, y = 0.0, z = 0.0;  // unit rotation axis (zero if degenerate)
  double angle = 0.0;                // rotation angle in [0, pi]
  bool degenerate = false;           // angle below threshold; axis undefined
};

// Axis-angle of the rotation represented by a unitary u, global phase
// removed. Angle < 1e-9 rad reports degenerate. At angle == pi (where both
// axis signs describe the same rotation) the sign is normalized so the first
// nonzero axis component is positive.
AxisAngle rotation_axis_angle(const Mat2& u);

}  // namespace rp

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "core/dynamics.hpp"
#include "core/ensemble.hpp"

namespace rp {

// Control objectives. All three are |z|^2 with z linear in the propagator:
//   pp_inversion     z = <e|U|g>                 (population transfer)
//   pp_beamsplitter  z = <psi_T|U|g>, psi_T = (|g> + |e>)/sqrt(2)
//   ur180            z = Tr(U_pi^dag U) / 2      (universal-rotation mirror,
//                        global-phase invariant via |z|^2)
enum class FidelityKind { pp_inversion, pp_beamsplitter, ur180 };

double f_pp_inversion(const Mat2& u);
double f_pp_beamsplitter(const Mat2& u);
// target_axis_phase is the azimuth of the target pi-rotation axis in the
// equatorial plane; 0 means a pi rotation about x.
double f_ur180(const Mat2& u, double target_axis_phase = 0.0);
Mat2 ur180_target(double target_axis_phase);

// Sum of squared phase increments, sum_n (phi_{n+1} - phi_n)^2, and its
// gradient with respect to each phase.
std::pair<double, std::vector<double>> smoothness_penalty(const PulseWaveform& w);

struct ObjectiveSpec {
  FidelityKind kind = FidelityKind::pp_inversion;
  Ensemble ensemble;
  double smoothness_weight = 1e-4;  // rad^-2
  bool antisymmetric = false;       // constrain phi(tau - t) = -phi(t)
  double target_axis_phase = 0.0;   // ur180 only
};

// total = fidelity - smoothness_weight * penalty. The gradient is with
// respect to the optimization parameters: all N phases normally, or the
// reduced half-profile (length ceil(N/2), middle pinned to zero for odd N)
// when antisymmetric.
struct ObjectiveValue {
  double fidelity = 0.0;  // ensemble-averaged, penalty-free
  double penalty = 0.0;
  double total = 0.0;
  std::vector<double> gradient;
};

// Ensemble-weighted objective with the exact analytic gradient. Atom Rabi
// frequencies are omega_scale * w.omega_nominal. Evaluations of ensemble
// points fan out across threads; the reduction order is fixed, so results
// are bit-identical for any thread count. With spec.antisymmetric set, w
// must satisfy the constraint exactly or the call is rejected.
ObjectiveValue ensemble_objective(const PulseWaveform& w,
                                  const ObjectiveSpec& spec);

// Value-only ensemble average of the chosen fidelity (no gradient).
double ensemble_fidelity(const PulseWaveform& w, const Ensemble& ensemble,
                         FidelityKind kind, double target_axis_phase = 0.0);

// Antisymmetric half-profile parameterization: the free parameters are the
// first ceil(N/2) phases; expansion mirrors them with exact negation and
// pins the middle slice of an odd N to zero.
std::size_t reduced_size(std::size_t n);
std::vector<double> expand_antisymmetric(const std::vector<double>& half,
                                         std::size_t n);
std::vector<double> reduce_gradient_antisymmetric(
    const std::vector<double>& full);

}  // namespace rp

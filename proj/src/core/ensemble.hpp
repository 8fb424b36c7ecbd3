#pragma once

#include <vector>

#include "core/constants.hpp"

namespace rp {

// Thermal cloud of two-level atoms addressed by counter-propagating Raman
// beams. Doppler shifts enter as a Gaussian detuning distribution with
// standard deviation k_eff * sqrt(kB T / m); spatially varying beam intensity
// enters as a uniform spread of the Rabi frequency around nominal.
struct ThermalSpec {
  double temperature = 0.0;            // K
  double wavelength = d2_wavelength;   // m
  double atom_mass = rb85_mass;        // kg
  bool counterprop = true;             // k_eff = 4*pi/lambda (else 2*pi/lambda)
};

double doppler_sigma(const ThermalSpec& spec);  // rad/s

struct EnsemblePoint {
  double delta = 0.0;        // detuning, rad/s
  double omega_scale = 1.0;  // Rabi frequency relative to nominal
  double weight = 1.0;
};

struct Ensemble {
  std::vector<EnsemblePoint> points;
};

// Quadrature grid over the thermal distribution: n_delta equispaced
// detunings across +-span_sigmas * sigma weighted by the Gaussian density,
// crossed with n_omega equispaced Rabi scales on [1-h, 1+h] with uniform
// weights (h = rabi_halfwidth). Weights are normalized to sum to 1.
// A 1-point axis collapses to its center (delta = 0 / scale = 1); asking for
// more than one point on an axis of zero width is rejected.
Ensemble build_ensemble(const ThermalSpec& spec, double rabi_halfwidth,
                        int n_delta, int n_omega, double span_sigmas = 3.0);

Ensemble single_point_ensemble(double delta, double omega_scale = 1.0);

}  // namespace rp

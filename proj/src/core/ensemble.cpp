#include "core/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace rp {

double doppler_sigma(const ThermalSpec& spec) {
  if (!(spec.temperature >= 0.0) || !std::isfinite(spec.temperature))
    throw std::invalid_argument("temperature must be >= 0");
  if (!(spec.wavelength > 0.0) || !std::isfinite(spec.wavelength))
    throw std::invalid_argument("wavelength must be > 0");
  if (!(spec.atom_mass > 0.0) || !std::isfinite(spec.atom_mass))
    throw std::invalid_argument("atom_mass must be > 0");
  const double k_eff = (spec.counterprop ? 2.0 : 1.0) * two_pi / spec.wavelength;
  return k_eff * std::sqrt(k_boltzmann * spec.temperature / spec.atom_mass);
}

Ensemble build_ensemble(const ThermalSpec& spec, double rabi_halfwidth,
                        int n_delta, int n_omega, double span_sigmas) {
  if (n_delta < 1 || n_omega < 1)
    throw std::invalid_argument("grid sizes must be >= 1");
  if (!std::isfinite(rabi_halfwidth) || rabi_halfwidth < 0.0 ||
      rabi_halfwidth >= 1.0)
    throw std::invalid_argument("rabi_halfwidth must be in [0, 1)");
  if (!std::isfinite(span_sigmas) || span_sigmas < 0.0)
    throw std::invalid_argument("span_sigmas must be >= 0");

  const double sigma = doppler_sigma(spec);
  const double half_span = span_sigmas * sigma;
  if (n_delta > 1 && !(half_span > 0.0))
    throw std::invalid_argument(
        "zero detuning span requires n_delta == 1 (T == 0 or span == 0)");
  if (n_omega > 1 && !(rabi_halfwidth > 0.0))
    throw std::invalid_argument("zero coupling spread requires n_omega == 1");

  std::vector<double> deltas(n_delta, 0.0), dweights(n_delta, 1.0);
  if (n_delta > 1) {
    for (int i = 0; i < n_delta; ++i) {
      const double d =
          -half_span + 2.0 * half_span * static_cast<double>(i) /
                           static_cast<double>(n_delta - 1);
      deltas[i] = d;
      dweights[i] = std::exp(-0.5 * (d / sigma) * (d / sigma));
    }
  }

  std::vector<double> scales(n_omega, 1.0);
  if (n_omega > 1) {
    for (int j = 0; j < n_omega; ++j)
      scales[j] = 1.0 - rabi_halfwidth +
                  2.0 * rabi_halfwidth * static_cast<double>(j) /
                      static_cast<double>(n_omega - 1);
  }

  Ensemble out;
  out.points.reserve(static_cast<std::size_t>(n_delta) * n_omega);
  double total = 0.0;
  for (int i = 0; i < n_delta; ++i)
    for (int j = 0; j < n_omega; ++j) {
      out.points.push_back({deltas[i], scales[j], dweights[i]});
      total += dweights[i];
    }
  for (auto& p : out.points) p.weight /= total;
  return out;
}

Ensemble single_point_ensemble(double delta, double omega_scale) {
  if (!std::isfinite(delta) || !std::isfinite(omega_scale) ||
      !(omega_scale > 0.0))
    throw std::invalid_argument("bad ensemble point");
  Ensemble out;
  out.points.push_back({delta, omega_scale, 1.0});
  return out;
}

}  // namespace rp

#include "core/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/constants.hpp"

namespace rp {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

void validate(const AtomParams& atom) {
  require_finite(atom.delta, "delta");
  require_finite(atom.omega_r, "omega_r");
  if (!(atom.omega_r > 0.0))
    throw std::invalid_argument("omega_r must be > 0");
}

void validate(const PulseWaveform& w) {
  if (w.phases.empty())
    throw std::invalid_argument("waveform needs at least one slice");
  require_finite(w.dt, "dt");
  if (!(w.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  require_finite(w.omega_nominal, "omega_nominal");
  if (!(w.omega_nominal > 0.0))
    throw std::invalid_argument("omega_nominal must be > 0");
  for (double p : w.phases) require_finite(p, "phase");
}

Mat2 step_propagator(double phi, const AtomParams& atom, double dt) {
  require_finite(phi, "phi");
  require_finite(dt, "dt");
  if (dt < 0.0) throw std::invalid_argument("dt must be >= 0");
  validate(atom);

  const double w = std::hypot(atom.omega_r, atom.delta);
  const double half = 0.5 * w * dt;
  const double sn = std::sin(half);
  const cplx c{std::cos(half), (atom.delta / w) * sn};
  const cplx s = std::polar((atom.omega_r / w) * sn, phi);
  const cplx mi{0.0, -1.0};
  return {std::conj(c), mi * std::conj(s), mi * s, c};
}

Mat2 pulse_propagator(const PulseWaveform& w, const AtomParams& atom) {
  validate(w);
  Mat2 u;  // identity
  for (double phi : w.phases) u = step_propagator(phi, atom, w.dt) * u;
  return u;
}

std::vector<TrajectorySample> evolve_trajectory(const PulseWaveform& w,
                                                const AtomParams& atom,
                                                const State& initial) {
  validate(w);
  validate(atom);
  std::vector<TrajectorySample> out;
  out.reserve(w.phases.size() + 1);
  State s = initial;
  out.push_back({0.0, s});
  for (std::size_t n = 0; n < w.phases.size(); ++n) {
    s = step_propagator(w.phases[n], atom, w.dt) * s;
    out.push_back({w.dt * static_cast<double>(n + 1), s});
  }
  return out;
}

Mat2 free_evolution(double delta, double tau, double extra_phase) {
  require_finite(delta, "delta");
  require_finite(tau, "tau");
  require_finite(extra_phase, "extra_phase");
  if (tau < 0.0) throw std::invalid_argument("tau must be >= 0");
  const double half = 0.5 * (delta * tau + extra_phase);
  return {std::polar(1.0, half), 0.0, 0.0, std::polar(1.0, -half)};
}

PulseWaveform flip_reverse(const PulseWaveform& w) {
  validate(w);
  PulseWaveform out = w;
  const std::size_t n = w.phases.size();
  for (std::size_t i = 0; i < n; ++i) out.phases[i] = -w.phases[n - 1 - i];
  return out;
}

PulseWaveform retuned(const PulseWaveform& w, double omega_new) {
  validate(w);
  require_finite(omega_new, "omega_new");
  if (!(omega_new > 0.0)) throw std::invalid_argument("omega_new must be > 0");
  PulseWaveform out = w;
  out.dt = w.dt * (w.omega_nominal / omega_new);
  out.omega_nominal = omega_new;
  return out;
}

bool midpoint_antisymmetric(const PulseWaveform& w) {
  const std::size_t n = w.phases.size();
  for (std::size_t i = 0; i < n / 2; ++i)
    if (w.phases[n - 1 - i] != -w.phases[i]) return false;
  if (n % 2 == 1 && w.phases[n / 2] != 0.0) return false;
  return true;
}

AxisAngle rotation_axis_angle(const Mat2& u) {
  if (unitarity_defect(u) > 1e-6)
    throw std::invalid_argument("rotation_axis_angle: input is not unitary");

  // Remove the global phase by scaling to unit determinant, then read the
  // quaternion (t, x, y, z) from u = t I - i (x sx + y sy + z sz).
  const cplx phase = std::sqrt(det(u));
  const Mat2 v = (1.0 / phase) * u;
  double t = 0.5 * (v.gg.real() + v.ee.real());
  double x = -0.5 * (v.ge.imag() + v.eg.imag());
  double y = 0.5 * (v.eg.real() - v.ge.real());
  double z = 0.5 * (v.ee.imag() - v.gg.imag());
  if (t < 0.0) {
    t = -t;
    x = -x;
    y = -y;
    z = -z;
  }
  const double r = std::sqrt(x * x + y * y + z * z);
  const double angle = 2.0 * std::atan2(r, t);

  AxisAngle out;
  out.angle = angle;
  if (angle < 1e-9) {
    out.degenerate = true;
    return out;
  }
  out.x = x / r;
  out.y = y / r;
  out.z = z / r;
  if (angle > pi - 1e-9) {
    // Both axis signs describe a 180-degree rotation; pick the one whose
    // first nonzero component is positive.
    double lead = 0.0;
    if (std::abs(out.x) > 1e-12)
      lead = out.x;
    else if (std::abs(out.y) > 1e-12)
      lead = out.y;
    else
      lead = out.z;
    if (lead < 0.0) {
      out.x = -out.x;
      out.y = -out.y;
      out.z = -out.z;
    }
  }
  return out;
}

}  // namespace rp

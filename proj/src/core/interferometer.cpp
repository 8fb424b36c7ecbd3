#include "core/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/constants.hpp"
#include "core/fidelity.hpp"
#include "core/parallel.hpp"

namespace rp {

namespace {

// Wrap an angle to (-pi, pi].
double wrap_pi(double x) {
  double v = std::remainder(x, two_pi);
  if (v <= -pi) v += two_pi;
  return v;
}

PulseWaveform with_phase_offset(const PulseWaveform& w, double offset) {
  PulseWaveform out = w;
  if (offset != 0.0) {
    for (double& p : out.phases) p += offset;
  }
  return out;
}

}  // namespace

PulseWaveform rect_waveform(double area, double phase, double omega) {
  if (!(area > 0.0)) throw std::invalid_argument("rect_waveform: area must be positive");
  if (!(omega > 0.0)) throw std::invalid_argument("rect_waveform: omega must be positive");
  PulseWaveform w;
  w.phases = {phase};
  w.dt = area / omega;
  w.omega_nominal = omega;
  return w;
}

PulseWaveform waltz_waveform(double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("waltz_waveform: omega must be positive");
  PulseWaveform w;
  // Segments of area pi/2, pi, 3*pi/2 at phases 0, pi, 0 -> six slices of
  // area pi/2 each.
  w.phases = {0.0, pi, pi, 0.0, 0.0, 0.0};
  w.dt = (pi / omega) / 2.0;
  w.omega_nominal = omega;
  return w;
}

double sequence_pe(const PulseSequence& seq, const AtomParams& atom) {
  if (seq.pulses.empty()) throw std::invalid_argument("sequence_pe: no pulses");
  if (!(seq.dwell >= 0.0) || !std::isfinite(seq.dwell))
    throw std::invalid_argument("sequence_pe: dwell must be finite and non-negative");
  validate(atom);
  for (const auto& p : seq.pulses) validate(p);

  const std::size_t n = seq.pulses.size();
  State state;  // |g>
  for (std::size_t i = 0; i < n; ++i) {
    const bool last = (i + 1 == n);
    if (last && seq.bs_phase_offset != 0.0) {
      state = pulse_propagator(with_phase_offset(seq.pulses[i], seq.bs_phase_offset), atom) * state;
    } else {
      state = pulse_propagator(seq.pulses[i], atom) * state;
    }
    if (!last) {
      const bool final_dwell = (i + 2 == n);
      const double extra = final_dwell ? seq.inertial_phase : 0.0;
      const double delta = seq.dwell_detuning ? atom.delta : 0.0;
      state = free_evolution(delta, seq.dwell, extra) * state;
    }
  }
  const double amp = std::abs(state.ce);
  return amp * amp;
}

FringeData fringe_scan(const PulseSequence& seq, const Ensemble& ensemble,
                       int n_phi, double omega_reference) {
  if (n_phi < 8) throw std::invalid_argument("fringe_scan: need at least 8 scan points");
  if (ensemble.points.empty()) throw std::invalid_argument("fringe_scan: empty ensemble");
  if (!(omega_reference > 0.0))
    throw std::invalid_argument("fringe_scan: omega_reference must be positive");

  double total_weight = 0.0;
  for (const auto& p : ensemble.points) total_weight += p.weight;
  if (!(total_weight > 0.0))
    throw std::invalid_argument("fringe_scan: ensemble weights sum to zero");

  FringeData data;
  data.phi.resize(static_cast<std::size_t>(n_phi));
  data.pe.resize(static_cast<std::size_t>(n_phi));
  const double step = 2.0 * two_pi / n_phi;  // [0, 4*pi)
  for (int j = 0; j < n_phi; ++j) data.phi[static_cast<std::size_t>(j)] = step * j;

  parallel_for(static_cast<std::size_t>(n_phi), [&](std::size_t j) {
    PulseSequence s = seq;
    s.bs_phase_offset = seq.bs_phase_offset + data.phi[j];
    double acc = 0.0;  // fixed-order reduction inside one scan point
    for (const auto& p : ensemble.points) {
      const AtomParams atom{p.delta, p.omega_scale * omega_reference};
      acc += p.weight * sequence_pe(s, atom);
    }
    data.pe[j] = acc / total_weight;
  });
  return data;
}

FringeFit fit_fringe(const FringeData& data) {
  const std::size_t n = data.phi.size();
  if (n < 8 || data.pe.size() != n)
    throw std::invalid_argument("fit_fringe: need >= 8 matched samples");
  const double h = (data.phi.back() - data.phi.front()) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw std::invalid_argument("fit_fringe: scan points must increase");
  for (std::size_t j = 1; j < n; ++j) {
    const double gap = data.phi[j] - data.phi[j - 1];
    if (std::abs(gap - h) > 1e-9 * std::max(1.0, h))
      throw std::invalid_argument("fit_fringe: scan points must be equispaced");
  }
  const double total = h * static_cast<double>(n);
  const double periods = total / two_pi;
  if (std::abs(periods - std::round(periods)) > 1e-6 || std::round(periods) < 1.0)
    throw std::invalid_argument("fit_fringe: scan must cover whole fringe periods");

  double mean = 0.0, c1 = 0.0, s1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mean += data.pe[j];
    c1 += data.pe[j] * std::cos(data.phi[j]);
    s1 += data.pe[j] * std::sin(data.phi[j]);
  }
  mean /= static_cast<double>(n);
  c1 *= 2.0 / static_cast<double>(n);
  s1 *= 2.0 / static_cast<double>(n);

  FringeFit fit;
  fit.offset = 2.0 * mean;
  fit.contrast = 2.0 * std::hypot(c1, s1);
  fit.phase = (fit.contrast > 0.0) ? wrap_pi(std::atan2(s1, -c1)) : 0.0;

  double ss = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double model =
        0.5 * (fit.offset - fit.contrast * std::cos(data.phi[j] + fit.phase));
    const double r = data.pe[j] - model;
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

DeltaPhi delta_phi(const Mat2& u1, const Mat2& u2, const Mat2& u3) {
  constexpr double tiny = 1e-12;
  const cplx e1 = u1.eg, g1 = u1.gg, e2 = u2.eg, g3 = u3.gg, e3 = u3.eg;
  DeltaPhi out;
  if (std::abs(e1) < tiny || std::abs(g1) < tiny || std::abs(e2) < tiny ||
      std::abs(g3) < tiny || std::abs(e3) < tiny) {
    out.degenerate = true;
    return out;
  }
  out.value = wrap_pi(std::arg(e1) - std::arg(g1) - 2.0 * std::arg(e2) +
                      std::arg(g3) + std::arg(e3));
  return out;
}

DeltaPhiStats delta_phi_ensemble(const PulseWaveform& bs,
                                 const PulseWaveform& mirror,
                                 const PulseWaveform& final_bs,
                                 const Ensemble& ensemble,
                                 double omega_reference) {
  if (ensemble.points.empty())
    throw std::invalid_argument("delta_phi_ensemble: empty ensemble");
  if (!(omega_reference > 0.0))
    throw std::invalid_argument("delta_phi_ensemble: omega_reference must be positive");
  validate(bs);
  validate(mirror);
  validate(final_bs);

  const std::size_t n = ensemble.points.size();
  std::vector<double> values(n, 0.0);
  std::vector<char> degenerate(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const auto& p = ensemble.points[i];
    const AtomParams atom{p.delta, p.omega_scale * omega_reference};
    const DeltaPhi d = delta_phi(pulse_propagator(bs, atom),
                                 pulse_propagator(mirror, atom),
                                 pulse_propagator(final_bs, atom));
    values[i] = d.value;
    degenerate[i] = d.degenerate ? 1 : 0;
  });

  DeltaPhiStats stats;
  double weight = 0.0, c = 0.0, s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (degenerate[i]) {
      ++stats.n_degenerate;
      continue;
    }
    const double w = ensemble.points[i].weight;
    weight += w;
    c += w * std::cos(values[i]);
    s += w * std::sin(values[i]);
  }
  if (!(weight > 0.0)) return stats;  // everything degenerate: zeros + count
  stats.mean = wrap_pi(std::atan2(s, c));
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (degenerate[i]) continue;
    const double d = wrap_pi(values[i] - stats.mean);
    var += ensemble.points[i].weight * d * d;
  }
  stats.stddev = std::sqrt(var / weight);
  return stats;
}

std::vector<double> contrast_map(const PulseSequence& seq,
                                 const std::vector<double>& delta_over_omega,
                                 const std::vector<double>& omega_scales,
                                 int n_phi, double omega_reference) {
  if (delta_over_omega.empty() || omega_scales.empty())
    throw std::invalid_argument("contrast_map: empty grid axis");
  if (!(omega_reference > 0.0))
    throw std::invalid_argument("contrast_map: omega_reference must be positive");
  if (n_phi < 8) throw std::invalid_argument("contrast_map: need at least 8 scan points");

  const std::size_t nd = delta_over_omega.size();
  const std::size_t ns = omega_scales.size();
  std::vector<double> out(nd * ns, 0.0);
  const double step = 2.0 * two_pi / n_phi;

  parallel_for(nd * ns, [&](std::size_t idx) {
    const std::size_t i = idx / ns;
    const std::size_t j = idx % ns;
    const AtomParams atom{delta_over_omega[i] * omega_reference,
                          omega_scales[j] * omega_reference};
    FringeData data;
    data.phi.resize(static_cast<std::size_t>(n_phi));
    data.pe.resize(static_cast<std::size_t>(n_phi));
    PulseSequence s = seq;
    for (int k = 0; k < n_phi; ++k) {
      data.phi[static_cast<std::size_t>(k)] = step * k;
      s.bs_phase_offset = seq.bs_phase_offset + step * k;
      data.pe[static_cast<std::size_t>(k)] = sequence_pe(s, atom);
    }
    out[idx] = fit_fringe(data).contrast;
  });
  return out;
}

namespace {

// Quadrature ensemble for thermal scans; zero-width axes collapse to a
// single point instead of being rejected.
Ensemble scan_ensemble(const ThermalSpec& spec, double rabi_halfwidth,
                       const ScanQuadrature& quad) {
  if (quad.n_delta < 1 || quad.n_omega < 1)
    throw std::invalid_argument("scan quadrature sizes must be >= 1");
  const int nd = (doppler_sigma(spec) > 0.0) ? quad.n_delta : 1;
  const int no = (rabi_halfwidth > 0.0) ? quad.n_omega : 1;
  return build_ensemble(spec, rabi_halfwidth, nd, no, quad.span_sigmas);
}

}  // namespace

std::vector<double> spectral_scan(const PulseWaveform& w,
                                  const ThermalSpec& spec,
                                  double rabi_halfwidth,
                                  const std::vector<double>& laser_detunings,
                                  const ScanQuadrature& quad) {
  validate(w);
  if (laser_detunings.empty())
    throw std::invalid_argument("spectral_scan: no detunings");
  const Ensemble ens = scan_ensemble(spec, rabi_halfwidth, quad);

  std::vector<double> out(laser_detunings.size(), 0.0);
  parallel_for(laser_detunings.size(), [&](std::size_t i) {
    double acc = 0.0;
    for (const auto& p : ens.points) {
      const AtomParams atom{laser_detunings[i] + p.delta,
                            p.omega_scale * w.omega_nominal};
      acc += p.weight * f_pp_inversion(pulse_propagator(w, atom));
    }
    out[i] = acc;
  });
  return out;
}

namespace {

Mat2 truncated_propagator(const PulseWaveform& w, const AtomParams& atom,
                          double tau) {
  Mat2 u;  // identity
  double remaining = tau;
  for (std::size_t k = 0; k < w.phases.size() && remaining > 0.0; ++k) {
    const double dt = std::min(w.dt, remaining);
    u = step_propagator(w.phases[k], atom, dt) * u;
    remaining -= dt;
  }
  if (remaining > 0.0)  // drive past the end at the final phase
    u = step_propagator(w.phases.back(), atom, remaining) * u;
  return u;
}

}  // namespace

std::vector<double> temporal_scan(const PulseWaveform& w,
                                  const ThermalSpec& spec,
                                  double rabi_halfwidth,
                                  const std::vector<double>& taus,
                                  const ScanQuadrature& quad) {
  validate(w);
  if (taus.empty()) throw std::invalid_argument("temporal_scan: no times");
  for (double t : taus) {
    if (!(t >= 0.0) || !std::isfinite(t))
      throw std::invalid_argument("temporal_scan: times must be finite and non-negative");
  }
  const Ensemble ens = scan_ensemble(spec, rabi_halfwidth, quad);

  std::vector<double> out(taus.size(), 0.0);
  parallel_for(taus.size(), [&](std::size_t i) {
    double acc = 0.0;
    for (const auto& p : ens.points) {
      const AtomParams atom{p.delta, p.omega_scale * w.omega_nominal};
      const Mat2 u = truncated_propagator(w, atom, taus[i]);
      acc += p.weight * f_pp_inversion(u);
    }
    out[i] = acc;
  });
  return out;
}

}  // namespace rp

#include "ramanpulse.h"

#include <cmath>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>

#include "core/dynamics.hpp"
#include "core/ensemble.hpp"
#include "core/fidelity.hpp"
#include "core/grape.hpp"
#include "core/interferometer.hpp"
#include "core/parallel.hpp"

struct rp_waveform {
  rp::PulseWaveform w;
};

struct rp_ensemble {
  rp::Ensemble e;
};

struct rp_report {
  rp::OptimizeReport r;
};

namespace {

thread_local std::string t_error;

rp_status fail(rp_status s, const char* msg) {
  t_error = msg;
  return s;
}

// Runs fn, translating exceptions into status codes + rp_last_error text.
template <typename Fn>
rp_status guarded(Fn&& fn) {
  try {
    fn();
    return RP_OK;
  } catch (const std::invalid_argument& e) {
    return fail(RP_EINVAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RP_ENOMEM, "out of memory");
  } catch (const std::exception& e) {
    return fail(RP_EFAIL, e.what());
  } catch (...) {
    return fail(RP_EFAIL, "unknown error");
  }
}

rp::FidelityKind to_kind(int kind) {
  switch (kind) {
    case RP_FIDELITY_INVERSION:
      return rp::FidelityKind::pp_inversion;
    case RP_FIDELITY_BEAMSPLITTER:
      return rp::FidelityKind::pp_beamsplitter;
    case RP_FIDELITY_UR180:
      return rp::FidelityKind::ur180;
    default:
      throw std::invalid_argument("unknown fidelity kind");
  }
}

rp::PulseSequence make_sequence(const rp_waveform* const* pulses,
                                size_t n_pulses, double dwell_s,
                                double inertial_phase, int dwell_detuning) {
  if (pulses == nullptr || n_pulses == 0)
    throw std::invalid_argument("pulse list is null or empty");
  rp::PulseSequence seq;
  seq.pulses.reserve(n_pulses);
  for (size_t i = 0; i < n_pulses; ++i) {
    if (pulses[i] == nullptr) throw std::invalid_argument("null pulse handle");
    seq.pulses.push_back(pulses[i]->w);
  }
  seq.dwell = dwell_s;
  seq.inertial_phase = inertial_phase;
  seq.dwell_detuning = dwell_detuning != 0;
  return seq;
}

}  // namespace

extern "C" {

const char* rp_last_error(void) { return t_error.c_str(); }

const char* rp_version(void) { return "1.0.0"; }

void rp_set_max_threads(unsigned n) { rp::set_max_threads(n); }

/* ---------------- waveforms ---------------- */

rp_status rp_waveform_create(const double* phases, size_t n, double dt,
                             double omega_nominal, rp_waveform** out) {
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  *out = nullptr;
  if (phases == nullptr || n == 0)
    return fail(RP_EINVAL, "phases is null or empty");
  return guarded([&] {
    rp::PulseWaveform w;
    w.phases.assign(phases, phases + n);
    w.dt = dt;
    w.omega_nominal = omega_nominal;
    rp::validate(w);
    *out = new rp_waveform{std::move(w)};
  });
}

rp_status rp_waveform_rect(double area, double phase, double omega,
                           rp_waveform** out) {
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  *out = nullptr;
  return guarded([&] { *out = new rp_waveform{rp::rect_waveform(area, phase, omega)}; });
}

rp_status rp_waveform_waltz(double omega, rp_waveform** out) {
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  *out = nullptr;
  return guarded([&] { *out = new rp_waveform{rp::waltz_waveform(omega)}; });
}

rp_status rp_waveform_flip_reverse(const rp_waveform* w, rp_waveform** out) {
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  *out = nullptr;
  if (w == nullptr) return fail(RP_EINVAL, "waveform is null");
  return guarded([&] { *out = new rp_waveform{rp::flip_reverse(w->w)}; });
}

rp_status rp_waveform_retune(const rp_waveform* w, double omega_new,
                             rp_waveform** out) {
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  *out = nullptr;
  if (w == nullptr) return fail(RP_EINVAL, "waveform is null");
  return guarded([&] { *out = new rp_waveform{rp::retuned(w->w, omega_new)}; });
}

size_t rp_waveform_size(const rp_waveform* w) {
  return w == nullptr ? 0 : w->w.phases.size();
}

double rp_waveform_dt(const rp_waveform* w) {
  return w == nullptr ? 0.0 : w->w.dt;
}

double rp_waveform_omega(const rp_waveform* w) {
  return w == nullptr ? 0.0 : w->w.omega_nominal;
}

rp_status rp_waveform_phases(const rp_waveform* w, double* out, size_t n) {
  if (w == nullptr) return fail(RP_EINVAL, "waveform is null");
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  if (n != w->w.phases.size())
    return fail(RP_EINVAL, "buffer size does not match waveform size");
  for (size_t i = 0; i < n; ++i) out[i] = w->w.phases[i];
  return RP_OK;
}

void rp_waveform_free(rp_waveform* w) { delete w; }

/* ---------------- ensembles ---------------- */

rp_status rp_ensemble_thermal(double temperature_k, double rabi_halfwidth,
                              int n_delta, int n_omega, rp_ensemble** out) {
  return rp_ensemble_thermal_ex(temperature_k, rp::d2_wavelength,
                                rp::rb85_mass, 1, rabi_halfwidth, n_delta,
                                n_omega, 3.0, out);
}

rp_status rp_ensemble_thermal_ex(double temperature_k, double wavelength_m,
                                 double atom_mass_kg, int counterprop,
                                 double rabi_halfwidth, int n_delta,
                                 int n_omega, double span_sigmas,
                                 rp_ensemble** out) {
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  *out = nullptr;
  return guarded([&] {
    rp::ThermalSpec spec;
    spec.temperature = temperature_k;
    spec.wavelength = wavelength_m;
    spec.atom_mass = atom_mass_kg;
    spec.counterprop = counterprop != 0;
    *out = new rp_ensemble{
        rp::build_ensemble(spec, rabi_halfwidth, n_delta, n_omega, span_sigmas)};
  });
}

rp_status rp_ensemble_single(double delta, double omega_scale,
                             rp_ensemble** out) {
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  *out = nullptr;
  return guarded([&] {
    *out = new rp_ensemble{rp::single_point_ensemble(delta, omega_scale)};
  });
}

size_t rp_ensemble_size(const rp_ensemble* e) {
  return e == nullptr ? 0 : e->e.points.size();
}

void rp_ensemble_free(rp_ensemble* e) { delete e; }

double rp_doppler_sigma(double temperature_k) {
  try {
    rp::ThermalSpec spec;
    spec.temperature = temperature_k;
    return rp::doppler_sigma(spec);
  } catch (const std::exception& e) {
    t_error = e.what();
    return std::nan("");
  }
}

/* ---------------- single-atom response ---------------- */

rp_status rp_transfer_probability(const rp_waveform* w, double delta,
                                  double omega_r, double* out) {
  if (w == nullptr) return fail(RP_EINVAL, "waveform is null");
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  return guarded([&] {
    const rp::Mat2 u = rp::pulse_propagator(w->w, {delta, omega_r});
    *out = rp::f_pp_inversion(u);
  });
}

rp_status rp_unitarity_defect(const rp_waveform* w, double delta,
                              double omega_r, double* out) {
  if (w == nullptr) return fail(RP_EINVAL, "waveform is null");
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  return guarded([&] {
    const rp::Mat2 u = rp::pulse_propagator(w->w, {delta, omega_r});
    *out = rp::unitarity_defect(u);
  });
}

rp_status rp_rotation_axis_angle(const rp_waveform* w, double delta,
                                 double omega_r, double axis[3],
                                 double* angle, int* degenerate) {
  if (w == nullptr) return fail(RP_EINVAL, "waveform is null");
  if (axis == nullptr || angle == nullptr || degenerate == nullptr)
    return fail(RP_EINVAL, "output pointer is null");
  return guarded([&] {
    const rp::Mat2 u = rp::pulse_propagator(w->w, {delta, omega_r});
    const rp::AxisAngle aa = rp::rotation_axis_angle(u);
    axis[0] = aa.x;
    axis[1] = aa.y;
    axis[2] = aa.z;
    *angle = aa.angle;
    *degenerate = aa.degenerate ? 1 : 0;
  });
}

/* ---------------- fidelities ---------------- */

rp_status rp_ensemble_fidelity(const rp_waveform* w, const rp_ensemble* e,
                               int kind, double target_axis_phase,
                               double* out) {
  if (w == nullptr) return fail(RP_EINVAL, "waveform is null");
  if (e == nullptr) return fail(RP_EINVAL, "ensemble is null");
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  return guarded([&] {
    *out = rp::ensemble_fidelity(w->w, e->e, to_kind(kind), target_axis_phase);
  });
}

/* ---------------- optimization ---------------- */

void rp_optimize_params_init(rp_optimize_params* p) {
  if (p == nullptr) return;
  p->n_steps = 100;
  p->duration_tpi = 7.4;
  p->omega_nominal = 0.0;
  p->fidelity_kind = RP_FIDELITY_INVERSION;
  p->target_axis_phase = 0.0;
  p->smoothness_weight = 1e-4;
  p->antisymmetric = 0;
  p->init_kind = RP_INIT_RANDOM_SMOOTH;
  p->init_constant_phase = 0.0;
  p->init_amplitude = 0.5;
  p->init_correlation = 10.0;
  p->init_waveform = nullptr;
  p->max_iters = 2000;
  p->target_fidelity = 0.99;
  p->grad_tol = 1e-8;
  p->seed = 0;
  p->n_starts = 5;
}

rp_status rp_optimize(const rp_optimize_params* p, const rp_ensemble* e,
                      rp_report** out) {
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  *out = nullptr;
  if (p == nullptr) return fail(RP_EINVAL, "params is null");
  if (e == nullptr) return fail(RP_EINVAL, "ensemble is null");
  return guarded([&] {
    rp::OptimizeConfig cfg;
    cfg.n_steps = p->n_steps;
    cfg.duration_tpi = p->duration_tpi;
    cfg.omega_nominal = p->omega_nominal;
    cfg.objective.kind = to_kind(p->fidelity_kind);
    cfg.objective.ensemble = e->e;
    cfg.objective.smoothness_weight = p->smoothness_weight;
    cfg.objective.antisymmetric = p->antisymmetric != 0;
    cfg.objective.target_axis_phase = p->target_axis_phase;
    switch (p->init_kind) {
      case RP_INIT_CONSTANT:
        cfg.init.kind = rp::InitStrategy::Kind::constant;
        break;
      case RP_INIT_RANDOM_SMOOTH:
        cfg.init.kind = rp::InitStrategy::Kind::random_smooth;
        break;
      case RP_INIT_WAVEFORM:
        cfg.init.kind = rp::InitStrategy::Kind::from_file;
        if (p->init_waveform == nullptr)
          throw std::invalid_argument("init_waveform is null");
        cfg.init.waveform = p->init_waveform->w;
        break;
      default:
        throw std::invalid_argument("unknown init kind");
    }
    cfg.init.constant_phase = p->init_constant_phase;
    cfg.init.amplitude = p->init_amplitude;
    if (!(p->init_correlation >= 1.0) ||
        p->init_correlation > 1e6)
      throw std::invalid_argument("init_correlation must be in [1, 1e6]");
    cfg.init.correlation = static_cast<int>(std::lround(p->init_correlation));
    cfg.max_iters = p->max_iters;
    cfg.target_fidelity = p->target_fidelity;
    cfg.grad_tol = p->grad_tol;
    cfg.seed = p->seed;
    cfg.n_starts = p->n_starts;
    *out = new rp_report{rp::optimize(cfg)};
  });
}

rp_status rp_report_waveform(const rp_report* r, rp_waveform** out) {
  if (out == nullptr) return fail(RP_EINVAL, "out is null");
  *out = nullptr;
  if (r == nullptr) return fail(RP_EINVAL, "report is null");
  return guarded([&] { *out = new rp_waveform{r->r.waveform}; });
}

double rp_report_fidelity(const rp_report* r) {
  return r == nullptr ? std::nan("") : r->r.fidelity;
}

double rp_report_penalty(const rp_report* r) {
  return r == nullptr ? std::nan("") : r->r.penalty;
}

double rp_report_total(const rp_report* r) {
  return r == nullptr ? std::nan("") : r->r.total;
}

int rp_report_iterations(const rp_report* r) {
  return r == nullptr ? -1 : r->r.iterations;
}

const char* rp_report_termination(const rp_report* r) {
  return r == nullptr ? "null" : rp::to_string(r->r.reason);
}

size_t rp_report_trace_size(const rp_report* r) {
  return r == nullptr ? 0 : r->r.trace.size();
}

rp_status rp_report_trace(const rp_report* r, double* fidelity, double* total,
                          double* grad_norm, size_t n) {
  if (r == nullptr) return fail(RP_EINVAL, "report is null");
  if (n != r->r.trace.size())
    return fail(RP_EINVAL, "buffer size does not match trace size");
  for (size_t i = 0; i < n; ++i) {
    if (fidelity != nullptr) fidelity[i] = r->r.trace[i].fidelity;
    if (total != nullptr) total[i] = r->r.trace[i].value;
    if (grad_norm != nullptr) grad_norm[i] = r->r.trace[i].grad_norm;
  }
  return RP_OK;
}

void rp_report_free(rp_report* r) { delete r; }

/* ---------------- interferometry ---------------- */

rp_status rp_fringe_scan(const rp_waveform* const* pulses, size_t n_pulses,
                         double dwell_s, double inertial_phase,
                         int dwell_detuning, const rp_ensemble* e,
                         double omega_reference, int n_phi, double* phi_out,
                         double* pe_out) {
  if (e == nullptr) return fail(RP_EINVAL, "ensemble is null");
  if (phi_out == nullptr || pe_out == nullptr)
    return fail(RP_EINVAL, "output pointer is null");
  return guarded([&] {
    const rp::PulseSequence seq =
        make_sequence(pulses, n_pulses, dwell_s, inertial_phase, dwell_detuning);
    const rp::FringeData data =
        rp::fringe_scan(seq, e->e, n_phi, omega_reference);
    for (size_t i = 0; i < data.phi.size(); ++i) {
      phi_out[i] = data.phi[i];
      pe_out[i] = data.pe[i];
    }
  });
}

rp_status rp_fit_fringe(const double* phi, const double* pe, size_t n,
                        double* offset, double* contrast, double* phase,
                        double* residual_rms) {
  if (phi == nullptr || pe == nullptr)
    return fail(RP_EINVAL, "input pointer is null");
  return guarded([&] {
    rp::FringeData data;
    data.phi.assign(phi, phi + n);
    data.pe.assign(pe, pe + n);
    const rp::FringeFit fit = rp::fit_fringe(data);
    if (offset != nullptr) *offset = fit.offset;
    if (contrast != nullptr) *contrast = fit.contrast;
    if (phase != nullptr) *phase = fit.phase;
    if (residual_rms != nullptr) *residual_rms = fit.residual_rms;
  });
}

rp_status rp_delta_phi_stats(const rp_waveform* bs, const rp_waveform* mirror,
                             const rp_waveform* final_bs,
                             const rp_ensemble* e, double omega_reference,
                             double* mean, double* stddev,
                             size_t* n_degenerate) {
  if (bs == nullptr || mirror == nullptr || final_bs == nullptr)
    return fail(RP_EINVAL, "waveform is null");
  if (e == nullptr) return fail(RP_EINVAL, "ensemble is null");
  return guarded([&] {
    const rp::DeltaPhiStats stats = rp::delta_phi_ensemble(
        bs->w, mirror->w, final_bs->w, e->e, omega_reference);
    if (mean != nullptr) *mean = stats.mean;
    if (stddev != nullptr) *stddev = stats.stddev;
    if (n_degenerate != nullptr) *n_degenerate = stats.n_degenerate;
  });
}

rp_status rp_spectral_scan(const rp_waveform* w, double temperature_k,
                           double rabi_halfwidth, const double* detunings,
                           size_t n, int n_delta, int n_omega,
                           double span_sigmas, double* out) {
  if (w == nullptr) return fail(RP_EINVAL, "waveform is null");
  if (detunings == nullptr || out == nullptr)
    return fail(RP_EINVAL, "pointer is null");
  return guarded([&] {
    rp::ThermalSpec spec;
    spec.temperature = temperature_k;
    const std::vector<double> dl(detunings, detunings + n);
    const rp::ScanQuadrature quad{n_delta, n_omega, span_sigmas};
    const std::vector<double> vals =
        rp::spectral_scan(w->w, spec, rabi_halfwidth, dl, quad);
    for (size_t i = 0; i < vals.size(); ++i) out[i] = vals[i];
  });
}

rp_status rp_temporal_scan(const rp_waveform* w, double temperature_k,
                           double rabi_halfwidth, const double* taus,
                           size_t n, int n_delta, int n_omega,
                           double span_sigmas, double* out) {
  if (w == nullptr) return fail(RP_EINVAL, "waveform is null");
  if (taus == nullptr || out == nullptr)
    return fail(RP_EINVAL, "pointer is null");
  return guarded([&] {
    rp::ThermalSpec spec;
    spec.temperature = temperature_k;
    const std::vector<double> ts(taus, taus + n);
    const rp::ScanQuadrature quad{n_delta, n_omega, span_sigmas};
    const std::vector<double> vals =
        rp::temporal_scan(w->w, spec, rabi_halfwidth, ts, quad);
    for (size_t i = 0; i < vals.size(); ++i) out[i] = vals[i];
  });
}

rp_status rp_contrast_map(const rp_waveform* const* pulses, size_t n_pulses,
                          double dwell_s, int dwell_detuning,
                          const double* delta_over_omega, size_t nd,
                          const double* omega_scales, size_t ns, int n_phi,
                          double omega_reference, double* out) {
  if (delta_over_omega == nullptr || omega_scales == nullptr || out == nullptr)
    return fail(RP_EINVAL, "pointer is null");
  return guarded([&] {
    const rp::PulseSequence seq =
        make_sequence(pulses, n_pulses, dwell_s, 0.0, dwell_detuning);
    const std::vector<double> xs(delta_over_omega, delta_over_omega + nd);
    const std::vector<double> ss(omega_scales, omega_scales + ns);
    const std::vector<double> vals =
        rp::contrast_map(seq, xs, ss, n_phi, omega_reference);
    for (size_t i = 0; i < vals.size(); ++i) out[i] = vals[i];
  });
}

} /* extern "C" */

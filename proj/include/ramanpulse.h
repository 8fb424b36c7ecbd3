/*
 * ramanpulse — phase-modulated two-level pulse design and atom-interferometer
 * simulation.
 *
 * C API conventions:
 *   - Every fallible call returns an rp_status; RP_OK (0) means success.
 *   - On failure, rp_last_error() returns a thread-local message describing
 *     the most recent failing call on this thread.
 *   - Objects are opaque handles created by rp_*_create-style calls and
 *     released with the matching rp_*_free (free functions accept NULL).
 *   - Angular frequencies are rad/s, times are seconds, phases are radians,
 *     temperatures are kelvin, unless stated otherwise.
 */
#ifndef RAMANPULSE_H
#define RAMANPULSE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rp_status {
  RP_OK = 0,
  RP_EINVAL = 1, /* invalid argument or configuration */
  RP_EFAIL = 2,  /* numerical or internal failure */
  RP_ENOMEM = 3  /* allocation failure */
} rp_status;

/* Message for the most recent failing call on the calling thread. Never
 * NULL; empty string when no failure has occurred. */
const char* rp_last_error(void);

/* Library version as "major.minor.patch". */
const char* rp_version(void);

/* Cap on worker threads used by ensemble averages and scans (0 restores the
 * hardware default). Results are bitwise independent of the thread count. */
void rp_set_max_threads(unsigned n);

/* ------------------------------------------------------------------ */
/* Waveforms: piecewise-constant phase profiles at fixed Rabi frequency */

typedef struct rp_waveform rp_waveform;

/* n phase slices (radians) of equal duration dt (seconds) driven at
 * omega_nominal (rad/s). */
rp_status rp_waveform_create(const double* phases, size_t n, double dt,
                             double omega_nominal, rp_waveform** out);

/* Single constant-phase slice with pulse area omega * dt = area. */
rp_status rp_waveform_rect(double area, double phase, double omega,
                           rp_waveform** out);

/* Composite inversion pulse: segments of area (pi/2, pi, 3*pi/2) at phases
 * (0, pi, 0). */
rp_status rp_waveform_waltz(double omega, rp_waveform** out);

/* Time-reversed, sign-flipped phase profile. */
rp_status rp_waveform_flip_reverse(const rp_waveform* w, rp_waveform** out);

/* Same dimensionless profile at a different Rabi frequency: phases are kept
 * and dt is rescaled by omega_old / omega_new. */
rp_status rp_waveform_retune(const rp_waveform* w, double omega_new,
                             rp_waveform** out);

size_t rp_waveform_size(const rp_waveform* w);  /* 0 if w is NULL */
double rp_waveform_dt(const rp_waveform* w);    /* 0 if w is NULL */
double rp_waveform_omega(const rp_waveform* w); /* 0 if w is NULL */

/* Copies exactly rp_waveform_size(w) phases into out (n must match). */
rp_status rp_waveform_phases(const rp_waveform* w, double* out, size_t n);

void rp_waveform_free(rp_waveform* w);

/* ------------------------------------------------------------------ */
/* Ensembles: weighted (detuning, Rabi-scale) samples of an atom cloud */

typedef struct rp_ensemble rp_ensemble;

/* Gaussian Doppler-detuning grid (n_delta points over +/-3 sigma) crossed
 * with a uniform Rabi-scale grid over [1-h, 1+h], h = rabi_halfwidth.
 * Uses the rubidium-85 D2 defaults (780.241 nm, counter-propagating). */
rp_status rp_ensemble_thermal(double temperature_k, double rabi_halfwidth,
                              int n_delta, int n_omega, rp_ensemble** out);

/* As rp_ensemble_thermal with explicit wavelength (m), atomic mass (kg),
 * beam geometry, and detuning span in standard deviations. */
rp_status rp_ensemble_thermal_ex(double temperature_k, double wavelength_m,
                                 double atom_mass_kg, int counterprop,
                                 double rabi_halfwidth, int n_delta,
                                 int n_omega, double span_sigmas,
                                 rp_ensemble** out);

/* One atom at fixed detuning (rad/s) and Rabi scale. */
rp_status rp_ensemble_single(double delta, double omega_scale,
                             rp_ensemble** out);

size_t rp_ensemble_size(const rp_ensemble* e); /* 0 if e is NULL */
void rp_ensemble_free(rp_ensemble* e);

/* Standard deviation (rad/s) of the two-photon Doppler detuning for the
 * rubidium-85 D2 counter-propagating defaults. NaN on invalid input. */
double rp_doppler_sigma(double temperature_k);

/* ------------------------------------------------------------------ */
/* Single-atom pulse response */

/* |<e|U|g>|^2 for one atom (detuning delta, Rabi frequency omega_r). */
rp_status rp_transfer_probability(const rp_waveform* w, double delta,
                                  double omega_r, double* out);

/* max-abs entry of U^dagger U - I; should sit at rounding level. */
rp_status rp_unitarity_defect(const rp_waveform* w, double delta,
                              double omega_r, double* out);

/* Bloch rotation axis (unit vector) and angle in [0, pi] of the pulse
 * propagator, ignoring global phase. *degenerate is set nonzero when the
 * rotation angle is too small for the axis to be defined. */
rp_status rp_rotation_axis_angle(const rp_waveform* w, double delta,
                                 double omega_r, double axis[3],
                                 double* angle, int* degenerate);

/* ------------------------------------------------------------------ */
/* Fidelities */

typedef enum rp_fidelity_kind {
  RP_FIDELITY_INVERSION = 0,   /* population transfer |g> -> |e>          */
  RP_FIDELITY_BEAMSPLITTER = 1,/* equal split of |g> with 90-deg phase    */
  RP_FIDELITY_UR180 = 2        /* universal-rotation 180-deg pulse        */
} rp_fidelity_kind;

/* Weighted ensemble average of the chosen fidelity. target_axis_phase sets
 * the equatorial azimuth (radians) of the UR180 target axis; it is ignored
 * by the other kinds. */
rp_status rp_ensemble_fidelity(const rp_waveform* w, const rp_ensemble* e,
                               int kind, double target_axis_phase,
                               double* out);

/* ------------------------------------------------------------------ */
/* Optimization */

typedef enum rp_init_kind {
  RP_INIT_CONSTANT = 0,      /* all phases = init_constant_phase */
  RP_INIT_RANDOM_SMOOTH = 1, /* seeded smooth random profile     */
  RP_INIT_WAVEFORM = 2       /* phases copied from init_waveform */
} rp_init_kind;

typedef struct rp_optimize_params {
  int n_steps;              /* phase slices */
  double duration_tpi;      /* pulse duration in pi-pulse-time units */
  double omega_nominal;     /* design Rabi frequency, rad/s */
  int fidelity_kind;        /* rp_fidelity_kind */
  double target_axis_phase; /* rad; UR180 target axis azimuth */
  double smoothness_weight; /* weight of the phase-step penalty */
  int antisymmetric;        /* nonzero: enforce midpoint antisymmetry */
  int init_kind;            /* rp_init_kind */
  double init_constant_phase; /* rad */
  double init_amplitude;    /* rad RMS of random-smooth initial profiles */
  double init_correlation;  /* correlation length of those profiles, slices */
  const rp_waveform* init_waveform; /* required iff RP_INIT_WAVEFORM */
  int max_iters;
  double target_fidelity;   /* stop once the ensemble fidelity reaches this */
  double grad_tol;          /* stop when max-abs gradient falls below this */
  uint64_t seed;            /* base seed; start s uses seed + s */
  int n_starts;             /* random restarts (random-smooth init only) */
} rp_optimize_params;

/* Fills *p with the library defaults (100 slices, 7.4 pi-times, inversion
 * target, smoothness weight 1e-4, random-smooth init, 5 starts, ...). */
void rp_optimize_params_init(rp_optimize_params* p);

typedef struct rp_report rp_report;

/* Gradient-ascent pulse design over the given ensemble. */
rp_status rp_optimize(const rp_optimize_params* p, const rp_ensemble* e,
                      rp_report** out);

rp_status rp_report_waveform(const rp_report* r, rp_waveform** out);
double rp_report_fidelity(const rp_report* r);  /* NaN if r is NULL */
double rp_report_penalty(const rp_report* r);   /* NaN if r is NULL */
double rp_report_total(const rp_report* r);     /* NaN if r is NULL */
int rp_report_iterations(const rp_report* r);   /* -1 if r is NULL */
/* Static string: "target_reached", "gradient_tolerance", "iteration_cap",
 * or "line_search_stalled". */
const char* rp_report_termination(const rp_report* r);
size_t rp_report_trace_size(const rp_report* r);
/* Per-iteration history; each array may be NULL to skip, otherwise it must
 * hold n == rp_report_trace_size(r) entries. */
rp_status rp_report_trace(const rp_report* r, double* fidelity, double* total,
                          double* grad_norm, size_t n);
void rp_report_free(rp_report* r);

/* ------------------------------------------------------------------ */
/* Interferometry */

/* Ensemble-averaged interferometer fringe. The sequence is the given pulses
 * separated by equal dwells; the final pulse is offset by each scanned
 * phase in turn (n_phi equispaced values over [0, 4*pi), written to
 * phi_out). inertial_phase enters as a relative z-phase in the final dwell.
 * When dwell_detuning is nonzero each atom also accrues delta * dwell per
 * dwell. Atom Rabi frequencies are omega_scale * omega_reference. */
rp_status rp_fringe_scan(const rp_waveform* const* pulses, size_t n_pulses,
                         double dwell_s, double inertial_phase,
                         int dwell_detuning, const rp_ensemble* e,
                         double omega_reference, int n_phi, double* phi_out,
                         double* pe_out);

/* Least-squares fringe parameters for equispaced samples covering whole
 * periods: pe = (offset - contrast * cos(phi + phase)) / 2. Any output
 * pointer may be NULL. */
rp_status rp_fit_fringe(const double* phi, const double* pe, size_t n,
                        double* offset, double* contrast, double* phase,
                        double* residual_rms);

/* Weighted circular mean / standard deviation over the ensemble of the
 * pulse-contributed interferometer phase of a bs / mirror / final-bs
 * sequence. Atoms whose matrix elements vanish (phase undefined) are
 * skipped and counted in *n_degenerate. Output pointers may be NULL. */
rp_status rp_delta_phi_stats(const rp_waveform* bs, const rp_waveform* mirror,
                             const rp_waveform* final_bs,
                             const rp_ensemble* e, double omega_reference,
                             double* mean, double* stddev,
                             size_t* n_degenerate);

/* Thermal-averaged transfer probability versus laser detuning (rad/s).
 * Each atom sees laser detuning plus its own Doppler shift; Rabi
 * frequencies are spread by rabi_halfwidth around the waveform nominal.
 * Quadrature: n_delta x n_omega grid over span_sigmas standard deviations
 * (zero-width axes collapse to one point). out holds n values. */
rp_status rp_spectral_scan(const rp_waveform* w, double temperature_k,
                           double rabi_halfwidth, const double* detunings,
                           size_t n, int n_delta, int n_omega,
                           double span_sigmas, double* out);

/* Thermal-averaged excited population versus pulse truncation time (s).
 * The drive continues at the final slice phase past the waveform end. */
rp_status rp_temporal_scan(const rp_waveform* w, double temperature_k,
                           double rabi_halfwidth, const double* taus,
                           size_t n, int n_delta, int n_omega,
                           double span_sigmas, double* out);

/* Fitted fringe contrast of a single atom on a (detuning, Rabi-scale) grid:
 * delta = delta_over_omega[i] * omega_reference, omega = omega_scales[j] *
 * omega_reference. out is row-major with shape [nd][ns]. Pass zero for
 * dwell_detuning (or a zero dwell) to isolate pulse errors from dwell
 * dephasing. */
rp_status rp_contrast_map(const rp_waveform* const* pulses, size_t n_pulses,
                          double dwell_s, int dwell_detuning,
                          const double* delta_over_omega, size_t nd,
                          const double* omega_scales, size_t ns, int n_phi,
                          double omega_reference, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RAMANPULSE_H */

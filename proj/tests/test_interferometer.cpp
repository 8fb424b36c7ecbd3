#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "core/constants.hpp"
#include "core/dynamics.hpp"
#include "core/ensemble.hpp"
#include "core/fidelity.hpp"
#include "core/interferometer.hpp"
#include "core/parallel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace rp;

namespace {

constexpr double kOmega = two_pi * 310e3;

double transfer(const PulseWaveform& w, const AtomParams& atom) {
  return std::norm(pulse_propagator(w, atom).eg);
}

double circ_diff(double a, double b) {
  return std::abs(std::remainder(a - b, two_pi));
}

PulseWaveform random_pulse(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uphase(-pi, pi);
  std::uniform_real_distribution<double> uarea(0.3, 2.2);
  PulseWaveform w;
  w.omega_nominal = kOmega;
  const std::size_t n = 1 + rng() % 6;
  w.dt = uarea(rng) * pi / kOmega / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) w.phases.push_back(uphase(rng));
  return w;
}

struct ThreadGuard {
  ~ThreadGuard() { set_max_threads(0); }
};

PulseSequence ideal_mz(double dwell = 50e-6) {
  PulseSequence seq;
  seq.pulses = {rect_waveform(0.5 * pi, 0.5 * pi, kOmega),
                rect_waveform(pi, 0.5 * pi, kOmega),
                flip_reverse(rect_waveform(0.5 * pi, 0.5 * pi, kOmega))};
  seq.dwell = dwell;
  return seq;
}

}  // namespace

TEST_SUITE("interferometer") {

TEST_CASE("rect and composite waveform structure") {
  const PulseWaveform r = rect_waveform(pi, 0.7, kOmega);
  REQUIRE(r.phases.size() == 1);
  CHECK(r.phases[0] == 0.7);
  CHECK(r.dt == pi / kOmega);
  CHECK(r.omega_nominal == kOmega);
  CHECK_THROWS_AS(rect_waveform(0.0, 0.0, kOmega), std::invalid_argument);
  CHECK_THROWS_AS(rect_waveform(pi, 0.0, 0.0), std::invalid_argument);

  const PulseWaveform wz = waltz_waveform(kOmega);
  REQUIRE(wz.phases.size() == 6);
  CHECK(wz.phases == std::vector<double>({0.0, pi, pi, 0.0, 0.0, 0.0}));
  CHECK(wz.dt == doctest::Approx(0.5 * pi / kOmega).epsilon(1e-15));
  CHECK(wz.duration() == doctest::Approx(3.0 * pi / kOmega).epsilon(1e-13));
  CHECK_THROWS_AS(waltz_waveform(-1.0), std::invalid_argument);
}

TEST_CASE("composite inversion is resonant-exact and broader than rect") {
  const PulseWaveform wz = waltz_waveform(kOmega);
  const PulseWaveform r = rect_waveform(pi, 0.0, kOmega);
  CHECK(transfer(wz, AtomParams{0.0, kOmega}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const double d = 0.2 * kOmega;
  CHECK(transfer(wz, AtomParams{d, kOmega}) >
        transfer(r, AtomParams{d, kOmega}));

  // 0.9-transfer half-width: first detuning where transfer drops below 0.9.
  auto halfwidth = [&](const PulseWaveform& w) {
    const double step = kOmega / 200.0;
    for (int k = 1; k <= 400; ++k) {
      if (transfer(w, AtomParams{step * k, kOmega}) < 0.9)
        return step * static_cast<double>(k - 1);
    }
    return 2.0 * kOmega;
  };
  CHECK(halfwidth(wz) > 1.5 * halfwidth(r));
}

TEST_CASE("sequence population matches the explicit matrix oracle") {
  std::mt19937_64 rng(20260819);
  std::uniform_real_distribution<double> uphase(-pi, pi);
  std::uniform_real_distribution<double> udwell(0.0, 2e-4);
  std::uniform_real_distribution<double> udelta(-1.5, 1.5);
  std::uniform_real_distribution<double> uscale(0.7, 1.3);

  for (int i = 0; i < 1000; ++i) {
    CAPTURE(i);
    PulseSequence seq;
    const std::size_t n_pulses = 1 + rng() % 5;
    std::vector<std::vector<double>> phases;
    std::vector<double> dts;
    for (std::size_t k = 0; k < n_pulses; ++k) {
      seq.pulses.push_back(random_pulse(rng));
      phases.push_back(seq.pulses.back().phases);
      dts.push_back(seq.pulses.back().dt);
    }
    seq.dwell = udwell(rng);
    seq.inertial_phase = uphase(rng);
    seq.bs_phase_offset = 2.0 * uphase(rng);
    seq.dwell_detuning = (i % 2 == 0);

    const AtomParams atom{udelta(rng) * kOmega, uscale(rng) * kOmega};
    const double got = sequence_pe(seq, atom);
    const double want = oracle::sequence_pe(
        phases, dts, atom.delta, atom.omega_r, seq.dwell, seq.inertial_phase,
        seq.dwell_detuning, seq.bs_phase_offset);
    CHECK(got == doctest::Approx(want).scale(1.0).epsilon(1e-12));
  }

  PulseSequence bad;
  CHECK_THROWS_AS(sequence_pe(bad, AtomParams{0.0, kOmega}),
                  std::invalid_argument);
  bad.pulses = {rect_waveform(pi, 0.0, kOmega)};
  bad.dwell = -1e-6;
  CHECK_THROWS_AS(sequence_pe(bad, AtomParams{0.0, kOmega}),
                  std::invalid_argument);
}

TEST_CASE("ideal Mach-Zehnder population follows (1 + cos(phase))/2") {
  const AtomParams atom{0.0, kOmega};
  for (double phase : {0.0, 0.3, 0.5 * pi, pi, 2.2, -1.7}) {
    CAPTURE(phase);
    PulseSequence seq = ideal_mz();
    seq.inertial_phase = phase;
    CHECK(sequence_pe(seq, atom) ==
          doctest::Approx(0.5 * (1.0 + std::cos(phase)))
              .scale(1.0)
              .epsilon(1e-12));
  }

  // Scanning the final-splitter phase traces a unit-contrast fringe whose
  // fitted phase sits at pi plus the injected phase.
  const Ensemble single = single_point_ensemble(0.0, 1.0);
  PulseSequence seq = ideal_mz();
  const FringeFit f0 = fit_fringe(fringe_scan(seq, single, 64, kOmega));
  CHECK(f0.offset == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f0.contrast == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(circ_diff(f0.phase, pi) <= 1e-12);
  CHECK(f0.residual_rms <= 1e-12);

  for (double phase : {0.35, -1.2}) {
    CAPTURE(phase);
    seq.inertial_phase = phase;
    const FringeFit f = fit_fringe(fringe_scan(seq, single, 64, kOmega));
    CHECK(circ_diff(f.phase, f0.phase + phase) <= 1e-9);
    CHECK(f.contrast == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("fringe scan grid and validation") {
  PulseSequence seq = ideal_mz();
  const Ensemble single = single_point_ensemble(0.0, 1.0);
  const FringeData data = fringe_scan(seq, single, 16, kOmega);
  REQUIRE(data.phi.size() == 16);
  REQUIRE(data.pe.size() == 16);
  for (int j = 0; j < 16; ++j)
    CHECK(data.phi[static_cast<std::size_t>(j)] ==
          doctest::Approx(2.0 * two_pi * j / 16.0).scale(1.0).epsilon(1e-15));

  // A base offset on the final splitter shifts every sample consistently.
  seq.bs_phase_offset = 0.5;
  const FringeData shifted = fringe_scan(seq, single, 16, kOmega);
  PulseSequence probe = ideal_mz();
  probe.bs_phase_offset = 0.5 + shifted.phi[3];
  CHECK(shifted.pe[3] ==
        doctest::Approx(sequence_pe(probe, AtomParams{0.0, kOmega}))
            .epsilon(1e-13));

  CHECK_THROWS_AS(fringe_scan(seq, single, 7, kOmega), std::invalid_argument);
  CHECK_THROWS_AS(fringe_scan(seq, Ensemble{}, 16, kOmega),
                  std::invalid_argument);
  CHECK_THROWS_AS(fringe_scan(seq, single, 16, 0.0), std::invalid_argument);
}

TEST_CASE("fringe scans are thread-count independent") {
  ThreadGuard guard;
  ThermalSpec spec;
  spec.temperature = 50e-6;
  const Ensemble ens = build_ensemble(spec, 0.1, 7, 3, 3.0);
  const PulseSequence seq = ideal_mz();
  set_max_threads(1);
  const FringeData serial = fringe_scan(seq, ens, 32, kOmega);
  set_max_threads(8);
  const FringeData parallel = fringe_scan(seq, ens, 32, kOmega);
  CHECK(serial.pe == parallel.pe);
  CHECK(serial.phi == parallel.phi);
}

TEST_CASE("fringe fit recovers synthetic parameters exactly") {
  auto synth = [](std::size_t n, double offset, double contrast,
                  double phase) {
    FringeData d;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = 2.0 * two_pi * static_cast<double>(j) /
                       static_cast<double>(n);
      d.phi.push_back(x);
      d.pe.push_back(0.5 * (offset - contrast * std::cos(x + phase)));
    }
    return d;
  };

  FringeFit f = fit_fringe(synth(48, 1.0, 0.8, 0.3));
  CHECK(f.offset == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.contrast == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(circ_diff(f.phase, 0.3) <= 1e-12);
  CHECK(f.residual_rms <= 1e-12);

  // A constant signal has no fringe.
  FringeData flat = synth(32, 0.74, 0.0, 0.0);
  f = fit_fringe(flat);
  CHECK(f.offset == doctest::Approx(0.74).epsilon(1e-12));
  CHECK(f.contrast <= 1e-14);

  // An identically dark port is the exact-zero edge: the phase convention
  // parks at zero instead of amplifying rounding noise.
  FringeData dark = synth(32, 0.0, 0.0, 0.0);
  for (auto& v : dark.pe) v = 0.0;
  f = fit_fringe(dark);
  CHECK(f.offset == 0.0);
  CHECK(f.contrast == 0.0);
  CHECK(f.phase == 0.0);
  CHECK(f.residual_rms == 0.0);

  // A third harmonic is orthogonal to the fit and lands in the residual.
  FringeData harm = synth(48, 1.0, 0.8, 0.3);
  for (std::size_t j = 0; j < harm.pe.size(); ++j)
    harm.pe[j] += 0.02 * std::cos(3.0 * harm.phi[j] + 1.1);
  f = fit_fringe(harm);
  CHECK(f.offset == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.contrast == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(circ_diff(f.phase, 0.3) <= 1e-10);
  CHECK(f.residual_rms ==
        doctest::Approx(0.02 / std::sqrt(2.0)).epsilon(1e-10));

  // Cross-check against an independent least-squares solve.
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> ua(0.5, 1.5), ub(0.05, 0.5),
      up(-pi, pi);
  for (std::size_t n : {16u, 48u, 128u}) {
    CAPTURE(n);
    const double a = ua(rng), b = ub(rng), p = up(rng);
    const FringeData d = synth(n, a, b, p);
    const FringeFit direct = fit_fringe(d);
    const oracle::LsqFringe lsq = oracle::lsq_fit_fringe(d.phi, d.pe);
    CHECK(std::abs(direct.offset - lsq.offset) <= 1e-10);
    CHECK(std::abs(direct.contrast - lsq.contrast) <= 1e-10);
    CHECK(circ_diff(direct.phase, lsq.phase) <= 1e-10);
  }
}

TEST_CASE("fringe fit rejects unusable scans") {
  FringeData d;
  for (int j = 0; j < 7; ++j) {
    d.phi.push_back(two_pi * j / 7.0);
    d.pe.push_back(0.5);
  }
  CHECK_THROWS_AS(fit_fringe(d), std::invalid_argument);  // too few points

  auto valid = []() {
    FringeData d;
    for (int j = 0; j < 16; ++j) {
      d.phi.push_back(two_pi * j / 16.0);
      d.pe.push_back(0.5);
    }
    return d;
  };
  d = valid();
  d.pe.pop_back();
  CHECK_THROWS_AS(fit_fringe(d), std::invalid_argument);  // size mismatch

  d = valid();
  d.phi[5] += 1e-3;
  CHECK_THROWS_AS(fit_fringe(d), std::invalid_argument);  // not equispaced

  d = valid();
  for (auto& x : d.phi) x = -x;
  CHECK_THROWS_AS(fit_fringe(d), std::invalid_argument);  // decreasing

  d = FringeData{};
  for (int j = 0; j < 16; ++j) {
    d.phi.push_back(1.5 * two_pi * j / 16.0);  // 1.5 periods
    d.pe.push_back(0.5);
  }
  CHECK_THROWS_AS(fit_fringe(d), std::invalid_argument);
}

TEST_CASE("interferometer phase anchors and the transpose identity") {
  const AtomParams atom{0.0, kOmega};

  // Equatorial mirror about +y between +y splitters with a time-mirrored
  // final splitter: the pulse contribution is exactly pi.
  {
    const Mat2 u1 = pulse_propagator(rect_waveform(0.5 * pi, 0.5 * pi, kOmega), atom);
    const Mat2 u2 = pulse_propagator(rect_waveform(pi, 0.5 * pi, kOmega), atom);
    const Mat2 u3 = pulse_propagator(
        flip_reverse(rect_waveform(0.5 * pi, 0.5 * pi, kOmega)), atom);
    const DeltaPhi d = delta_phi(u1, u2, u3);
    REQUIRE(!d.degenerate);
    CHECK(circ_diff(d.value, pi) <= 1e-12);
  }
  // The same geometry about +x lands on zero in this convention.
  {
    const Mat2 u1 = pulse_propagator(rect_waveform(0.5 * pi, 0.0, kOmega), atom);
    const Mat2 u2 = pulse_propagator(rect_waveform(pi, 0.0, kOmega), atom);
    const Mat2 u3 = pulse_propagator(
        flip_reverse(rect_waveform(0.5 * pi, 0.0, kOmega)), atom);
    const DeltaPhi d = delta_phi(u1, u2, u3);
    REQUIRE(!d.degenerate);
    CHECK(std::abs(d.value) <= 1e-12);
  }

  // With a time-mirrored final splitter the splitter terms collapse and
  // delta_phi = pi - 2 arg<e|U2|g> for any pulses and any atom.
  std::mt19937_64 rng(1618);
  std::uniform_real_distribution<double> udelta(-1.5, 1.5);
  std::uniform_real_distribution<double> uscale(0.7, 1.3);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    CAPTURE(i);
    const PulseWaveform bs = random_pulse(rng);
    const PulseWaveform mirror = random_pulse(rng);
    const AtomParams a{udelta(rng) * kOmega, uscale(rng) * kOmega};
    const Mat2 u1 = pulse_propagator(bs, a);
    const Mat2 u2 = pulse_propagator(mirror, a);
    const Mat2 u3 = pulse_propagator(flip_reverse(bs), a);
    const DeltaPhi d = delta_phi(u1, u2, u3);
    if (d.degenerate) continue;
    ++checked;
    const double expected = pi - 2.0 * std::arg(u2.eg);
    CHECK(circ_diff(d.value, expected) <= 1e-12);
  }
  CHECK(checked > 900);

  // Degenerate geometry: an identity mirror has no defined phase.
  const Mat2 u1 = pulse_propagator(rect_waveform(0.5 * pi, 0.5 * pi, kOmega), atom);
  CHECK(delta_phi(u1, Mat2{1.0, 0.0, 0.0, 1.0}, u1).degenerate);
}

TEST_CASE("time-antisymmetric mirrors cancel the per-atom phase") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> uphase(-pi, pi);
  std::uniform_real_distribution<double> udelta(-1.5, 1.5);
  std::uniform_real_distribution<double> uscale(0.7, 1.3);
  const PulseWaveform bs = rect_waveform(0.5 * pi, 0.5 * pi, kOmega);
  const PulseWaveform final_bs = flip_reverse(bs);

  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    CAPTURE(i);
    const std::size_t n = 2 + rng() % 9;
    std::vector<double> half(reduced_size(n));
    for (auto& v : half) v = uphase(rng);
    PulseWaveform mirror;
    mirror.omega_nominal = kOmega;
    mirror.dt = (0.5 + 0.1 * static_cast<double>(rng() % 15)) * pi /
                (kOmega * static_cast<double>(n));
    mirror.phases = expand_antisymmetric(half, n);
    REQUIRE(midpoint_antisymmetric(mirror));

    const AtomParams a{udelta(rng) * kOmega, uscale(rng) * kOmega};
    const DeltaPhi d = delta_phi(pulse_propagator(bs, a),
                                 pulse_propagator(mirror, a),
                                 pulse_propagator(final_bs, a));
    if (d.degenerate) continue;
    ++checked;
    CHECK(std::abs(d.value) <= 1e-9);
  }
  CHECK(checked > 300);
}

TEST_CASE("ensemble phase statistics") {
  const PulseWaveform bs = rect_waveform(0.5 * pi, 0.5 * pi, kOmega);
  const PulseWaveform final_bs = flip_reverse(bs);

  // Antisymmetric mirror across a hot cloud: no phase dispersion at all.
  ThermalSpec spec;
  spec.temperature = 120e-6;
  const Ensemble hot = build_ensemble(spec, 0.1, 61, 11, 3.0);
  const PulseWaveform x_mirror = rect_waveform(pi, 0.0, kOmega);
  const DeltaPhiStats anti = delta_phi_ensemble(bs, x_mirror, final_bs, hot, kOmega);
  CHECK(anti.n_degenerate == 0);
  CHECK(std::abs(anti.mean) <= 1e-9);
  CHECK(anti.stddev <= 1e-9);

  // The composite inversion pulse keeps its transfer robust but lets the
  // phase disperse badly across the same cloud — the reason mirror design
  // targets the full rotation, not just the populations.
  const PulseWaveform stepped = waltz_waveform(kOmega);
  const DeltaPhiStats rough = delta_phi_ensemble(bs, stepped, final_bs, hot, kOmega);
  CHECK(rough.stddev > 0.5);

  // Single-point ensemble reproduces the pointwise value with zero spread.
  const Ensemble one = single_point_ensemble(0.35 * kOmega, 0.9);
  const AtomParams atom{0.35 * kOmega, 0.9 * kOmega};
  const DeltaPhi direct = delta_phi(pulse_propagator(bs, atom),
                                    pulse_propagator(stepped, atom),
                                    pulse_propagator(final_bs, atom));
  REQUIRE(!direct.degenerate);
  const DeltaPhiStats single = delta_phi_ensemble(bs, stepped, final_bs, one, kOmega);
  CHECK(single.n_degenerate == 0);
  CHECK(circ_diff(single.mean, direct.value) <= 1e-12);
  CHECK(single.stddev <= 1e-12);

  // A resonant full-circle mirror is degenerate: zeros plus a count.
  const PulseWaveform full_circle = rect_waveform(2.0 * pi, 0.0, kOmega);
  const Ensemble resonant = single_point_ensemble(0.0, 1.0);
  const DeltaPhiStats none =
      delta_phi_ensemble(bs, full_circle, final_bs, resonant, kOmega);
  CHECK(none.n_degenerate == 1);
  CHECK(none.mean == 0.0);
  CHECK(none.stddev == 0.0);

  CHECK_THROWS_AS(delta_phi_ensemble(bs, stepped, final_bs, Ensemble{}, kOmega),
                  std::invalid_argument);
}

TEST_CASE("contrast map layout, anchors, and dwell handling") {
  const PulseSequence seq = ideal_mz(0.0);

  const std::vector<double> deltas{-1.0, 0.0, 1.0};
  const std::vector<double> scales{1.0};
  const std::vector<double> line = contrast_map(seq, deltas, scales, 32, kOmega);
  REQUIRE(line.size() == 3);
  CHECK(line[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(line[0] < 0.6);
  CHECK(line[2] < 0.6);
  CHECK(line[0] == doctest::Approx(line[2]).epsilon(1e-9));

  // Row-major [i_delta * n_scales + j_scale]: every cell must match the
  // same cell computed alone.
  const std::vector<double> d2{0.0, 1.0};
  const std::vector<double> s2{0.8, 1.0};
  const std::vector<double> grid = contrast_map(seq, d2, s2, 32, kOmega);
  REQUIRE(grid.size() == 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      const std::vector<double> cell =
          contrast_map(seq, {d2[i]}, {s2[j]}, 32, kOmega);
      CHECK(grid[i * 2 + j] == cell[0]);
    }

  // Zero dwell with detuning phases on equals finite dwell with them off:
  // both leave only the pulse errors.
  PulseSequence dwelled = ideal_mz(100e-6);
  dwelled.dwell_detuning = false;
  const std::vector<double> no_dephase =
      contrast_map(dwelled, deltas, scales, 32, kOmega);
  for (std::size_t k = 0; k < line.size(); ++k)
    CHECK(no_dephase[k] == doctest::Approx(line[k]).epsilon(1e-12));

  CHECK_THROWS_AS(contrast_map(seq, {}, scales, 32, kOmega),
                  std::invalid_argument);
  CHECK_THROWS_AS(contrast_map(seq, deltas, {}, 32, kOmega),
                  std::invalid_argument);
  CHECK_THROWS_AS(contrast_map(seq, deltas, scales, 7, kOmega),
                  std::invalid_argument);
  CHECK_THROWS_AS(contrast_map(seq, deltas, scales, 32, -kOmega),
                  std::invalid_argument);
}

TEST_CASE("spectral scan conventions") {
  const PulseWaveform r = rect_waveform(pi, 0.0, kOmega);

  // Zero-width cloud: the scan is the single-atom line shape.
  ThermalSpec cold;
  cold.temperature = 0.0;
  std::vector<double> detunings;
  for (int k = -10; k <= 10; ++k)
    detunings.push_back(0.2 * kOmega * static_cast<double>(k));
  const std::vector<double> line = spectral_scan(r, cold, 0.0, detunings);
  REQUIRE(line.size() == detunings.size());
  for (std::size_t k = 0; k < detunings.size(); ++k) {
    CAPTURE(k);
    CHECK(line[k] ==
          doctest::Approx(transfer(r, AtomParams{detunings[k], kOmega}))
              .scale(1.0)
              .epsilon(1e-12));
  }
  CHECK(line[10] == doctest::Approx(1.0).epsilon(1e-12));
  // Frozen anchor: transfer of a resonant-area flip at delta = omega.
  const std::vector<double> at_omega = spectral_scan(r, cold, 0.0, {kOmega});
  CHECK(at_omega[0] == doctest::Approx(oracle::kRectPiTransferAtDeltaEqOmega)
                           .epsilon(1e-12));

  // Thermal average: each atom sees the laser detuning plus its own Doppler
  // shift, with the coupling scaled off the waveform's nominal frequency.
  ThermalSpec warm;
  warm.temperature = 35e-6;
  const ScanQuadrature quad{61, 11, 3.0};
  const Ensemble ens = build_ensemble(warm, 0.10, 61, 11, 3.0);
  for (double dl : {0.0, 0.4e6, -1.1e6}) {
    CAPTURE(dl);
    double manual = 0.0;
    for (const auto& p : ens.points)
      manual += p.weight *
                transfer(r, AtomParams{dl + p.delta, p.omega_scale * kOmega});
    const std::vector<double> got = spectral_scan(r, warm, 0.10, {dl}, quad);
    CHECK(got[0] == doctest::Approx(manual).epsilon(1e-13));
  }

  // Symmetric pulse, symmetric cloud: the line is even in the detuning.
  const std::vector<double> sym =
      spectral_scan(r, warm, 0.10, {-0.8e6, 0.8e6}, quad);
  CHECK(sym[0] == doctest::Approx(sym[1]).epsilon(1e-12));

  // The composite pulse holds the line higher than rect off resonance.
  const PulseWaveform wz = waltz_waveform(kOmega);
  const std::vector<double> rect_res = spectral_scan(r, warm, 0.10, {0.0}, quad);
  const std::vector<double> waltz_res = spectral_scan(wz, warm, 0.10, {0.0}, quad);
  CHECK(waltz_res[0] > rect_res[0]);

  CHECK_THROWS_AS(spectral_scan(r, warm, 0.10, {}, quad),
                  std::invalid_argument);
}

TEST_CASE("temporal scan truncation semantics") {
  const PulseWaveform r = rect_waveform(pi, 0.0, kOmega);
  const double t_pi = pi / kOmega;
  ThermalSpec cold;
  cold.temperature = 0.0;

  // Single resonant atom: P_e(tau) = sin^2(omega tau / 2), and the drive
  // keeps rotating at the held phase beyond the waveform end.
  const std::vector<double> taus{0.0,        0.25 * t_pi, 0.5 * t_pi,
                                 0.75 * t_pi, t_pi,       2.0 * t_pi};
  const std::vector<double> pe = temporal_scan(r, cold, 0.0, taus);
  REQUIRE(pe.size() == taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    CAPTURE(k);
    const double s = std::sin(0.5 * kOmega * taus[k]);
    CHECK(pe[k] == doctest::Approx(s * s).scale(1.0).epsilon(1e-12));
  }

  // Composite-pulse segment boundaries at resonance.
  const PulseWaveform wz = waltz_waveform(kOmega);
  const std::vector<double> marks{0.5 * t_pi, 1.5 * t_pi, 3.0 * t_pi};
  const std::vector<double> wz_pe = temporal_scan(wz, cold, 0.0, marks);
  CHECK(wz_pe[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wz_pe[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wz_pe[2] == doctest::Approx(1.0).epsilon(1e-12));

  // Partial-slice truncation matches an explicit two-step matrix product.
  const double tau = 1.25 * wz.dt;
  const std::vector<double> part = temporal_scan(wz, cold, 0.0, {tau});
  const AtomParams atom{0.0, kOmega};
  const Mat2 u = step_propagator(wz.phases[1], atom, 0.25 * wz.dt) *
                 step_propagator(wz.phases[0], atom, wz.dt);
  CHECK(part[0] == doctest::Approx(std::norm(u.eg)).epsilon(1e-13));

  // Thermal averaging keeps the curve away from a clean flip.
  ThermalSpec hot;
  hot.temperature = 120e-6;
  const std::vector<double> hot_pe =
      temporal_scan(r, hot, 0.10, {t_pi}, ScanQuadrature{61, 11, 3.0});
  CHECK(hot_pe[0] < 0.8);
  CHECK(hot_pe[0] > 0.2);

  CHECK_THROWS_AS(temporal_scan(r, cold, 0.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(temporal_scan(r, cold, 0.0, {-1e-9}),
                  std::invalid_argument);
}

}  // TEST_SUITE

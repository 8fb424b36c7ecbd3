#include "core/grape.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "core/constants.hpp"

namespace rp {

namespace {

// Deterministic standard normals: mt19937_64 (bit-exact across platforms by
// the standard) driving a Box-Muller transform, bypassing the
// implementation-defined std distributions.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

 private:
  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// phi_k -> (phi_k - phi_{N-1-k}) / 2: smooth projection onto exactly
// midpoint-antisymmetric profiles (IEEE negation keeps it exact).
void antisymmetrize(std::vector<double>& p) {
  const std::size_t n = p.size();
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double d = 0.5 * (p[k] - p[n - 1 - k]);
    p[k] = d;
    p[n - 1 - k] = -d;
  }
  if (n % 2 == 1) p[n / 2] = 0.0;
}

void scale_to_rms(std::vector<double>& p, double rms_target) {
  double ss = 0.0;
  for (double v : p) ss += v * v;
  const double rms = std::sqrt(ss / static_cast<double>(p.size()));
  if (rms < 1e-300) return;
  const double c = rms_target / rms;
  for (double& v : p) v *= c;
}

std::vector<double> initial_parameters(const OptimizeConfig& cfg,
                                       int start_index) {
  const std::size_t n = static_cast<std::size_t>(cfg.n_steps);
  const bool anti = cfg.objective.antisymmetric;
  const std::size_t dim = anti ? reduced_size(n) : n;

  switch (cfg.init.kind) {
    case InitStrategy::Kind::constant: {
      std::vector<double> x(dim, cfg.init.constant_phase);
      if (anti && n % 2 == 1) x.back() = 0.0;  // pinned middle slice
      return x;
    }
    case InitStrategy::Kind::random_smooth: {
      std::vector<double> full = random_smooth_profile(
          cfg.n_steps, cfg.init.amplitude, cfg.init.correlation,
          cfg.seed + static_cast<std::uint64_t>(start_index));
      if (!anti) return full;
      antisymmetrize(full);
      scale_to_rms(full, cfg.init.amplitude);
      return {full.begin(), full.begin() + static_cast<long>(dim)};
    }
    case InitStrategy::Kind::from_file: {
      const auto& w = cfg.init.waveform;
      if (w.phases.size() != n)
        throw std::invalid_argument(
            "init waveform length does not match n_steps");
      if (!anti) return w.phases;
      if (!midpoint_antisymmetric(w))
        throw std::invalid_argument(
            "init waveform does not satisfy the antisymmetric "
            "parameterization");
      return {w.phases.begin(), w.phases.begin() + static_cast<long>(dim)};
    }
  }
  throw std::invalid_argument("unknown init strategy");
}

}  // namespace

std::vector<double> random_smooth_profile(int n, double amplitude_rms,
                                          int correlation,
                                          std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(amplitude_rms >= 0.0) || !std::isfinite(amplitude_rms))
    throw std::invalid_argument("amplitude must be >= 0");

  NormalSource normal(seed);
  std::vector<double> noise(static_cast<std::size_t>(n));
  for (double& v : noise) v = normal();
  if (correlation < 1) correlation = 1;

  // Gaussian moving average, kernel renormalized at the edges.
  const double sig = static_cast<double>(correlation);
  const int halfw = static_cast<int>(std::ceil(3.0 * sig));
  std::vector<double> kernel(static_cast<std::size_t>(2 * halfw + 1));
  for (int j = -halfw; j <= halfw; ++j)
    kernel[static_cast<std::size_t>(j + halfw)] =
        std::exp(-0.5 * (j / sig) * (j / sig));

  std::vector<double> smooth(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0, wsum = 0.0;
    for (int j = -halfw; j <= halfw; ++j) {
      const int k = i + j;
      if (k < 0 || k >= n) continue;
      const double kw = kernel[static_cast<std::size_t>(j + halfw)];
      acc += kw * noise[static_cast<std::size_t>(k)];
      wsum += kw;
    }
    smooth[static_cast<std::size_t>(i)] = acc / wsum;
  }
  scale_to_rms(smooth, amplitude_rms);
  return smooth;
}

OptimizeReport optimize(const OptimizeConfig& cfg) {
  if (cfg.n_steps < 2) throw std::invalid_argument("n_steps must be >= 2");
  if (!(cfg.duration_tpi > 0.0) || !std::isfinite(cfg.duration_tpi))
    throw std::invalid_argument("duration must be > 0");
  if (!(cfg.omega_nominal > 0.0) || !std::isfinite(cfg.omega_nominal))
    throw std::invalid_argument("omega_nominal must be > 0");
  if (cfg.objective.ensemble.points.empty())
    throw std::invalid_argument("ensemble must not be empty");
  if (cfg.max_iters < 0 || cfg.n_starts < 1)
    throw std::invalid_argument("bad iteration/start counts");

  const std::size_t n = static_cast<std::size_t>(cfg.n_steps);
  const bool anti = cfg.objective.antisymmetric;
  const double t_pi = pi / cfg.omega_nominal;
  const double dt = cfg.duration_tpi * t_pi / static_cast<double>(cfg.n_steps);

  auto make_waveform = [&](const std::vector<double>& x) {
    PulseWaveform w;
    w.phases = anti ? expand_antisymmetric(x, n) : x;
    w.dt = dt;
    w.omega_nominal = cfg.omega_nominal;
    return w;
  };

  const Evaluator evaluator = [&](const std::vector<double>& x) {
    const PulseWaveform w = make_waveform(x);
    ObjectiveValue ov = ensemble_objective(w, cfg.objective);
    EvalResult r;
    r.value = ov.total;
    r.gradient = std::move(ov.gradient);
    r.fidelity = ov.fidelity;
    r.penalty = ov.penalty;
    r.stop_hint = ov.fidelity >= cfg.target_fidelity;
    return r;
  };

  MaximizeOptions opt;
  opt.max_iters = cfg.max_iters;
  opt.grad_tol = cfg.grad_tol;
  opt.history = cfg.history;

  IterateObserver observer;
  if (cfg.observer)
    observer = [&](int iter, const std::vector<double>& x) {
      cfg.observer(iter, make_waveform(x));
    };

  // Multi-start only makes sense for randomized inits.
  const int starts =
      cfg.init.kind == InitStrategy::Kind::random_smooth ? cfg.n_starts : 1;

  OptimizeReport report;
  bool have_best = false;
  for (int s = 0; s < starts; ++s) {
    MaximizeResult r =
        lbfgs_maximize(evaluator, initial_parameters(cfg, s), opt, observer);
    if (!have_best || r.at.fidelity > report.fidelity) {
      have_best = true;
      report.waveform = make_waveform(r.x);
      report.fidelity = r.at.fidelity;
      report.penalty = r.at.penalty;
      report.total = r.at.value;
      report.reason = r.reason;
      report.trace = std::move(r.trace);
      report.iterations = r.iterations;
      report.best_start = s;
    }
    if (report.fidelity >= cfg.target_fidelity) break;
  }
  report.seed = cfg.seed;
  return report;
}

}  // namespace rp

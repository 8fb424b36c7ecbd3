#include "core/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace rp {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_finite(const EvalResult& r) {
  if (!std::isfinite(r.value))
    throw std::runtime_error("objective evaluated to a non-finite value");
  for (double g : r.gradient)
    if (!std::isfinite(g))
      throw std::runtime_error("gradient evaluated to a non-finite value");
}

struct Probe {
  double alpha = 0.0;
  double phi = 0.0;    // objective along the ray
  double dphi = 0.0;   // directional derivative along the ray
  std::vector<double> x;
  EvalResult at;
};

// Quadratic interpolation for the next trial step inside (lo, hi), using the
// value/slope at lo and the value at hi; falls back to bisection whenever the
// model is degenerate or the candidate leaves the safeguard window.
double interp_step(double a_lo, double phi_lo, double dphi_lo, double a_hi,
                   double phi_hi) {
  const double d = a_hi - a_lo;
  double cand = a_lo + 0.5 * d;
  const double denom = phi_hi - phi_lo - dphi_lo * d;
  if (denom != 0.0) {
    const double vertex = a_lo - 0.5 * dphi_lo * d * d / denom;
    const double lo = std::min(a_lo, a_hi), hi = std::max(a_lo, a_hi);
    const double margin = 0.1 * (hi - lo);
    if (vertex >= lo + margin && vertex <= hi - margin) cand = vertex;
  }
  return cand;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::target_reached: return "target_reached";
    case Termination::gradient_tolerance: return "gradient_tolerance";
    case Termination::iteration_cap: return "iteration_cap";
    case Termination::line_search_stalled: return "line_search_stalled";
  }
  return "unknown";
}

LineSearchResult line_search(const Evaluator& eval,
                             const std::vector<double>& x0,
                             const EvalResult& at_x0,
                             const std::vector<double>& direction,
                             double c1, double c2, double alpha_init) {
  if (direction.size() != x0.size())
    throw std::invalid_argument("direction/point dimension mismatch");
  const double phi0 = at_x0.value;
  const double dphi0 = dot(at_x0.gradient, direction);
  if (!(dphi0 > 0.0))
    throw std::invalid_argument(
        "line_search requires an ascent direction (positive directional "
        "derivative)");

  LineSearchResult out;
  auto probe_at = [&](double alpha) {
    Probe p;
    p.alpha = alpha;
    p.x = x0;
    for (std::size_t i = 0; i < p.x.size(); ++i)
      p.x[i] += alpha * direction[i];
    p.at = eval(p.x);
    ++out.evals;
    check_finite(p.at);
    p.phi = p.at.value;
    p.dphi = dot(p.at.gradient, direction);
    return p;
  };
  auto accept = [&](Probe&& p) {
    out.ok = true;
    out.step = p.alpha;
    out.x = std::move(p.x);
    out.at = std::move(p.at);
    return out;
  };
  auto wolfe = [&](const Probe& p) {
    return p.phi >= phi0 + c1 * p.alpha * dphi0 &&
           std::abs(p.dphi) <= c2 * dphi0;
  };

  // Zoom phase: lo satisfies sufficient increase and has the best value seen;
  // the admissible interval lies between lo and hi.
  auto zoom = [&](Probe lo, double a_hi, double phi_hi) -> LineSearchResult {
    for (int j = 0; j < 60; ++j) {
      if (std::abs(a_hi - lo.alpha) <=
          1e-14 * std::max(1.0, std::abs(lo.alpha)))
        return out;  // interval collapsed: fail
      Probe p = probe_at(interp_step(lo.alpha, lo.phi, lo.dphi, a_hi, phi_hi));
      if (p.phi < phi0 + c1 * p.alpha * dphi0 || p.phi <= lo.phi) {
        a_hi = p.alpha;
        phi_hi = p.phi;
        continue;
      }
      if (std::abs(p.dphi) <= c2 * dphi0) return accept(std::move(p));
      if (p.dphi * (a_hi - lo.alpha) <= 0.0) {
        a_hi = lo.alpha;
        phi_hi = lo.phi;
      }
      lo = std::move(p);
    }
    return out;  // fail
  };

  constexpr double alpha_max = 1e8;
  Probe prev;
  prev.alpha = 0.0;
  prev.phi = phi0;
  prev.dphi = dphi0;
  double alpha = alpha_init;
  for (int i = 0; i < 30 && alpha <= alpha_max; ++i) {
    Probe p = probe_at(alpha);
    if (p.phi < phi0 + c1 * p.alpha * dphi0 || (i > 0 && p.phi <= prev.phi))
      return zoom(std::move(prev), p.alpha, p.phi);
    if (std::abs(p.dphi) <= c2 * dphi0) return accept(std::move(p));
    if (p.dphi <= 0.0) {
      const double hi = prev.alpha, phi_hi = prev.phi;
      return zoom(std::move(p), hi, phi_hi);
    }
    prev = std::move(p);
    alpha *= 2.0;
  }
  return out;  // never bracketed: fail
}

MaximizeResult lbfgs_maximize(const Evaluator& eval, std::vector<double> x0,
                              const MaximizeOptions& options,
                              const IterateObserver& observer) {
  if (x0.empty()) throw std::invalid_argument("empty parameter vector");
  if (options.history < 1) throw std::invalid_argument("history must be >= 1");

  MaximizeResult res;
  res.x = std::move(x0);
  res.at = eval(res.x);
  res.n_evals = 1;
  check_finite(res.at);
  if (res.at.gradient.size() != res.x.size())
    throw std::invalid_argument("gradient dimension mismatch");

  auto record = [&](int iter) {
    res.trace.push_back({res.at.value, res.at.fidelity, res.at.penalty,
                         max_abs(res.at.gradient)});
    if (observer) observer(iter, res.x);
  };
  record(0);
  if (res.at.stop_hint) {
    res.reason = Termination::target_reached;
    return res;
  }
  if (max_abs(res.at.gradient) <= options.grad_tol) {
    res.reason = Termination::gradient_tolerance;
    return res;
  }

  struct Pair {
    std::vector<double> s;  // x_{k+1} - x_k
    std::vector<double> y;  // g_k - g_{k+1} (positive curvature on ascent)
    double rho = 0.0;
  };
  std::deque<Pair> history;

  // Two-loop recursion: returns H * g, an ascent direction for the current
  // inverse-curvature approximation.
  auto direction_from = [&](const std::vector<double>& g) {
    std::vector<double> q = g;
    std::vector<double> alphas(history.size(), 0.0);
    for (std::size_t i = history.size(); i-- > 0;) {
      const Pair& p = history[i];
      alphas[i] = p.rho * dot(p.s, q);
      for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alphas[i] * p.y[k];
    }
    if (!history.empty()) {
      const Pair& last = history.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
      const Pair& p = history[i];
      const double beta = p.rho * dot(p.y, q);
      for (std::size_t k = 0; k < q.size(); ++k)
        q[k] += p.s[k] * (alphas[i] - beta);
    }
    return q;
  };

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    std::vector<double> dir = direction_from(res.at.gradient);
    bool steepest = history.empty();
    if (dot(dir, res.at.gradient) <= 0.0) {
      // Curvature approximation went bad; drop it and climb the gradient.
      history.clear();
      dir = res.at.gradient;
      steepest = true;
    }
    const double alpha0 =
        steepest ? 1.0 / std::max(1.0, max_abs(dir)) : 1.0;

    LineSearchResult ls = line_search(eval, res.x, res.at, dir, 1e-4, 0.9,
                                      alpha0);
    res.n_evals += ls.evals;
    if (!ls.ok && !steepest) {
      // Restart: forget the quasi-Newton memory, retry along the gradient.
      history.clear();
      dir = res.at.gradient;
      ls = line_search(eval, res.x, res.at, dir, 1e-4, 0.9,
                       1.0 / std::max(1.0, max_abs(dir)));
      res.n_evals += ls.evals;
    }
    if (!ls.ok) {
      res.reason = Termination::line_search_stalled;
      return res;
    }

    Pair pair;
    pair.s.resize(res.x.size());
    pair.y.resize(res.x.size());
    for (std::size_t k = 0; k < res.x.size(); ++k) {
      pair.s[k] = ls.x[k] - res.x[k];
      pair.y[k] = res.at.gradient[k] - ls.at.gradient[k];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-12 * std::sqrt(dot(pair.s, pair.s) * dot(pair.y, pair.y))) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (history.size() > static_cast<std::size_t>(options.history))
        history.pop_front();
    }

    res.x = std::move(ls.x);
    res.at = std::move(ls.at);
    res.iterations = iter;
    record(iter);

    if (res.at.stop_hint) {
      res.reason = Termination::target_reached;
      return res;
    }
    if (max_abs(res.at.gradient) <= options.grad_tol) {
      res.reason = Termination::gradient_tolerance;
      return res;
    }
  }
  res.reason = Termination::iteration_cap;
  return res;
}

}  // namespace rp

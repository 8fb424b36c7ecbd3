#pragma once

#include <functional>
#include <vector>

namespace rp {

// One objective evaluation: value, gradient, and bookkeeping the optimizer
// reports in its trace. stop_hint lets the caller request early termination
// when an accepted iterate is already good enough (e.g. target fidelity).
struct EvalResult {
  double value = 0.0;
  std::vector<double> gradient;
  double fidelity = 0.0;
  double penalty = 0.0;
  bool stop_hint = false;
};

using Evaluator = std::function<EvalResult(const std::vector<double>&)>;

enum class Termination {
  target_reached,
  gradient_tolerance,
  iteration_cap,
  line_search_stalled,
};

const char* to_string(Termination t);

struct IterRecord {
  double value = 0.0;
  double fidelity = 0.0;
  double penalty = 0.0;
  double grad_norm = 0.0;  // max-abs
};

struct LineSearchResult {
  bool ok = false;
  double step = 0.0;
  std::vector<double> x;
  EvalResult at;
  int evals = 0;
};

// Strong-Wolfe line search along an ascent direction (sufficient increase
// with c1, curvature |phi'(a)| <= c2 * phi'(0)). The directional derivative
// at x0 must be positive, otherwise the call is rejected. Returns ok = false
// when no admissible step is found, which the optimizer treats as a signal
// to restart from steepest ascent.
LineSearchResult line_search(const Evaluator& eval,
                             const std::vector<double>& x0,
                             const EvalResult& at_x0,
                             const std::vector<double>& direction,
                             double c1 = 1e-4, double c2 = 0.9,
                             double alpha_init = 1.0);

struct MaximizeOptions {
  int max_iters = 2000;
  double grad_tol = 1e-8;  // on the max-abs gradient component
  int history = 10;        // L-BFGS memory
};

using IterateObserver =
    std::function<void(int iter, const std::vector<double>& x)>;

struct MaximizeResult {
  std::vector<double> x;
  EvalResult at;
  Termination reason = Termination::iteration_cap;
  std::vector<IterRecord> trace;  // entry per accepted iterate, including x0
  int iterations = 0;
  int n_evals = 0;
};

// L-BFGS ascent with strong-Wolfe steps. Accepted iterates never decrease
// the objective. After a line-search failure the memory is dropped and a
// steepest-ascent step is attempted; if that fails too, the run stops with
// line_search_stalled. A non-finite objective value anywhere aborts with an
// exception. Fully deterministic for a deterministic evaluator.
MaximizeResult lbfgs_maximize(const Evaluator& eval, std::vector<double> x0,
                              const MaximizeOptions& options = {},
                              const IterateObserver& observer = {});

}  // namespace rp

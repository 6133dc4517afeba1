// Result records shared by the bound computations and the iteration engines.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qbound {

// Two-sided sandwich around an achieved figure of merit:
//   lambda_sq <= achieved <= optimal <= upper,
// where lambda_sq is the normalized squared lower leg and upper the crude
// upper leg (both derived from the same trace quantity lambda).
// oracle_optimal carries an independently computed optimum when one exists.
struct bound_report {
  double lambda = 0.0;
  double lambda_sq = 0.0;
  double achieved = 0.0;
  double upper = 0.0;
  std::optional<double> oracle_optimal;
};

// Checks the sandwich ordering and the cap on lambda (1 for normalized
// discrimination, Tr of the relevant positive operator otherwise). Throws
// invariant_violation on failure.
void validate_bound_report(const bound_report& r, double lambda_cap,
                           double slack = 1e-9);

// One entry per recorded element of a directional iteration. Values are
// monotone lower estimates of the optimum; no optimality is claimed.
// stop_reason is one of "tolerance", "max_iters", "degenerate".
struct iteration_trace {
  std::vector<double> seminorms;
  std::vector<double> lambda_values;
  int steps = 0;
  bool converged = false;
  std::string stop_reason;
};

struct run_config {
  double tol = 1e-10;
  int max_iters = 1000;
};

}  // namespace qbound

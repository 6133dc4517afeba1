// Directional iteration engines. Each step replaces the current element by
// the feasible direction maximizing the relevant inner product; the recorded
// seminorms never decrease once the sequence is inside the feasible ball, and
// every recorded value is a monotone lower estimate of the optimum (no
// optimality is claimed on stopping). Three engines are kept separate on
// purpose: measurements, operations weighted by a PSD functional, and
// dilation contractions for overlap instances.
#pragma once

#include <vector>

#include "qbound/channel.hpp"
#include "qbound/measure.hpp"
#include "qbound/overlap.hpp"
#include "qbound/report.hpp"

namespace qbound {

// Figure of merit Tr(F * choi(R)) for a PSD weight F on the Choi space
// (dim_out tensor dual dim_in) of candidate operations R.
struct rw_functional {
  Eigen::Index dim_in = 0;
  Eigen::Index dim_out = 0;
  cmat f;
};

void validate_rw_functional(const rw_functional& f);
double rw_value(const rw_functional& f, const cp_map& r);

// One step: Choi -> Gamma^{-1/2+} F Choi F Gamma^{-1/2+} with
// Gamma = 1 (x) Tr_out(F Choi F). The result is always a valid operation.
cp_map rw_iterate(const rw_functional& f, const cp_map& r);

// One overlap step: the polar contraction of the gradient of the dilation
// seminorm. Accepts any finite nonzero start, contraction or not; the result
// is always a contraction.
cmat overlap_iterate(const overlap_instance& inst, const cmat& u);

// Squared dilation seminorm <u, u>; equals the overlap value of the induced
// operation when u is a contraction.
double overlap_seminorm_sq(const overlap_instance& inst, const cmat& u);

struct povm_iteration_result {
  povm measurement;
  iteration_trace trace;
};

struct rw_iteration_result {
  cp_map map;
  iteration_trace trace;
};

struct overlap_iteration_result {
  cmat u;
  iteration_trace trace;
};

// Runs the measurement step to a seminorm plateau (increase <= tol), the
// iteration budget, or a degenerate gradient. The start may be any PSD
// element list; its seminorm is recorded only when it is a valid sub-POVM.
povm_iteration_result iterate_povm_to_convergence(const ensemble& e,
                                                  const std::vector<cmat>& start,
                                                  const run_config& cfg);

rw_iteration_result rw_iterate_to_convergence(const rw_functional& f,
                                              const cp_map& start,
                                              const run_config& cfg);

overlap_iteration_result overlap_iterate_to_convergence(
    const overlap_instance& inst, const cmat& start, const run_config& cfg);

}  // namespace qbound

// Ensembles, measurements, and two-sided success-probability bounds: the
// square-root trace quantity Lambda sandwiches the optimum between Lambda^2
// and Lambda, the quadratic measurement achieves at least Lambda^2, and one
// directional iteration step improves any starting measurement.
#pragma once

#include <vector>

#include "qbound/numlin.hpp"
#include "qbound/report.hpp"

namespace qbound {

// States carry their prior probabilities: Sum_k Tr rho_k = 1.
struct ensemble {
  Eigen::Index dim = 0;
  std::vector<cmat> states;
};

// Elements are PSD with Sum_k M_k <= 1 (sub-measurements allowed; any
// deficit counts as failure in the success probability).
struct povm {
  Eigen::Index dim = 0;
  std::vector<cmat> elements;
};

// Kraus-style measurement operators E_k; the induced POVM is {E_k^dag E_k}.
struct generalized_measurement {
  Eigen::Index dim = 0;
  std::vector<cmat> kraus;
};

void validate_ensemble(const ensemble& e);
void validate_povm(const povm& m);
povm induced_povm(const generalized_measurement& g);

// Tr Sum_k M_k rho_k. The element list may be any PSD family of the right
// arity; validity as a sub-measurement is the caller's concern.
double p_succ(const ensemble& e, const std::vector<cmat>& elements);

// Sum_k Tr(f_k^dag g_k rho_k), the ensemble inner product of measurement
// operator lists. p_succ(e, {E^dag E}) equals the squared seminorm of E.
cx ensemble_inner_product(const ensemble& e, const std::vector<cmat>& f,
                          const std::vector<cmat>& g);

// One directional iteration step on POVM elements:
//   M_k -> S^{-1/2+} rho_k M_k rho_k S^{-1/2+},  S = Sum_l rho_l M_l rho_l.
// Accepts any PSD element list (the all-identity start included) and always
// returns a valid POVM summing to the projection onto the support of S.
povm jrf_iterate(const ensemble& e, const std::vector<cmat>& elements);

// Same step on measurement operators: E_k -> E_k rho_k S^{-1/2+}.
generalized_measurement jrf_iterate(const ensemble& e,
                                    const generalized_measurement& g);

// First iterate of the all-identity start:
//   M_k = (Sum rho^2)^{-1/2+} rho_k^2 (Sum rho^2)^{-1/2+}.
povm quadratic_measurement(const ensemble& e);

// M_k = (Sum rho)^{-1/2+} rho_k (Sum rho)^{-1/2+}.
povm pretty_good_measurement(const ensemble& e);

// Rank-one measurement for pure-state ensembles: e_k proportional to
// (Sum w^2 psi psi^dag)^{-1/2+} w_k psi_k. Weights sum to 1, vectors are
// unit norm.
povm holevo_pure_measurement(const std::vector<double>& weights,
                             const std::vector<cvec>& vectors);

// Lambda = Tr sqrt(Sum rho_k^2); report the sandwich
//   Lambda^2 <= p_succ(quadratic measurement) <= optimum <= Lambda,
// with the Helstrom optimum attached for two-state ensembles.
bound_report holevo_curlander_bounds(const ensemble& e);

struct helstrom_result {
  double p_opt = 0.0;
  povm measurement;
};

// Closed-form two-state optimum (1 + ||rho_1 - rho_2||_1) / 2 and the
// projective measurement achieving it.
helstrom_result helstrom_optimal(const ensemble& e);

}  // namespace qbound

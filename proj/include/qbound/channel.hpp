// Completely positive maps as Kraus lists, their Choi matrices and canonical
// dilations, decompositions adapted to a base state, and approximate reversal
// with two-sided entanglement-fidelity bounds.
#pragma once

#include <functional>
#include <vector>

#include "qbound/measure.hpp"
#include "qbound/numlin.hpp"
#include "qbound/report.hpp"

namespace qbound {

// Kraus operators are dim_out x dim_in. The struct itself is plain data:
// trace non-increase is checked by validate_quantum_operation where an
// operation is required, since CP maps built by the functional calculus may
// legitimately increase the trace.
struct cp_map {
  Eigen::Index dim_in = 0;
  Eigen::Index dim_out = 0;
  std::vector<cmat> kraus;
};

// Sum_k |F_k>> <<F_k| on (output tensor dual input), output factor slowest.
// Entry [(l,i),(l',j)] equals map(|i><j|)[l,l'].
struct choi_matrix {
  Eigen::Index dim_in = 0;
  Eigen::Index dim_out = 0;
  cmat m;
};

// Single isometry-shaped matrix u of shape (dim_out * dim_env) x dim_in with
// the environment index fastest; tracing out the environment recovers the
// map. dim_env = dim_out * dim_in always (columns of the Choi square root).
struct stinespring_dilation {
  Eigen::Index dim_in = 0;
  Eigen::Index dim_out = 0;
  Eigen::Index dim_env = 0;
  cmat u;
};

// Kraus decomposition adapted to a base state: Tr(E_k^dag E_l rho) = delta_kl
// and map(X) = Sum_k w_k E_k X E_k^dag on the support of rho.
struct rho_kraus_decomposition {
  std::vector<double> weights;
  std::vector<cmat> operators;
  cmat base_state;
};

void validate_cp_map(const cp_map& a);
// Additionally requires Sum_k F_k^dag F_k <= 1 within tolerance.
void validate_quantum_operation(const cp_map& a);
bool is_quantum_operation(const cp_map& a);
bool is_channel(const cp_map& a);

cmat apply(const cp_map& a, const cmat& x);
cmat adjoint_apply(const cp_map& a, const cmat& y);

choi_matrix choi(const cp_map& a);
// Canonical Kraus operators from the Choi spectrum (eigenvalues above the
// rank cutoff, descending order).
cp_map map_from_choi(const choi_matrix& c);
// Action through the Choi matrix directly; used to cross-check apply().
cmat apply_choi(const choi_matrix& c, const cmat& x);
// Builds the Choi matrix of a map given only its action on matrix units.
choi_matrix choi_from_action(const std::function<cmat(const cmat&)>& action,
                             Eigen::Index dim_in, Eigen::Index dim_out);

stinespring_dilation canonical_stinespring(const cp_map& a);

// Spectral decomposition of (map tensor id) applied to the projector onto
// the double ket of sqrt(rho). Weights sum to Tr map(rho) and descend.
rho_kraus_decomposition rho_kraus(const cp_map& a, const cmat& rho);

// f applied to the weight spectrum: X -> Sum_k f(w_k) E_k X E_k^dag. The
// result is CP but need not be trace non-increasing for general f.
cp_map functional_calculus(const cp_map& a, const cmat& rho,
                           const std::function<double(double)>& f);

// The weight-squared reweighting Sum_kl Tr(F_k^dag F_l rho) F_k X F_l^dag,
// computed from any Kraus list via its Gram matrix with respect to rho.
cp_map quadratic_reweighting(const cp_map& a, const cmat& rho);

// Sum_k |Tr(K_k rho)|^2 for a unit-trace state rho.
double entanglement_fidelity(const cmat& rho, const cp_map& a);

// Recovery map rho A2^dag(S^{-1/2+} . S^{-1/2+}) rho with A2 the quadratic
// reweighting and S = A2(rho^2); materialized through its Choi matrix.
cp_map quadratic_recovery(const cp_map& a, const cmat& rho);

// Recovery with Kraus operators sqrt(rho) F_k^dag (A(rho))^{-1/2+}.
cp_map barnum_knill_recovery(const cp_map& a, const cmat& rho);

// barnum_knill_recovery at the maximally mixed state.
cp_map transpose_channel(const cp_map& a);

// Kraus concatenation of after(before(.)), recompressed through the Choi
// matrix when the product list exceeds dim_in * dim_out operators.
cp_map compose(const cp_map& after, const cp_map& before);

// Lambda = Tr sqrt(A2(rho^2)); reports
//   Lambda^2 / Tr A(rho) <= F_e(rho, QR after A) <= sup_R F_e <= Lambda.
bound_report recovery_bounds(const cp_map& a, const cmat& rho);

cp_map depolarizing(double p, Eigen::Index dim);
cp_map amplitude_damping(double gamma);
cp_map unitary_channel(const cmat& u);
// dim -> outcome-count channel X -> Sum_k |k><k| Tr(M_k X).
cp_map measurement_channel(const povm& m);

}  // namespace qbound

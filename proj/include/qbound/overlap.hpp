// Restricted maximum overlap: how close a processed resource state mu on
// K tensor H can get to a target vector phi on L tensor H when an operation
// acts on the K factor only. Includes the quadratic overlapper achieving the
// squared lower leg, conditional min-entropy bounds, and the embedding of
// state discrimination as an overlap problem.
#pragma once

#include <vector>

#include "qbound/channel.hpp"
#include "qbound/measure.hpp"
#include "qbound/numlin.hpp"
#include "qbound/report.hpp"

namespace qbound {

// mu is PSD on K tensor H (K slowest); phi is a unit vector on L tensor H
// (L slowest). mu need not be normalized.
struct overlap_instance {
  Eigen::Index dim_k = 0;
  Eigen::Index dim_h = 0;
  Eigen::Index dim_l = 0;
  cmat mu;
  cvec phi;
};

// mu compressed onto the H-support of the target: mu_hat = (1 (x) P) mu
// (1 (x) P) with P the support projection of phi_h = Tr_L phi phi^dag.
struct hatted_instance {
  cmat mu_hat;
  cmat phi_h;
  cmat phi_l;
};

struct min_entropy_report {
  double s = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

void validate_overlap_instance(const overlap_instance& inst);

hatted_instance hat(const overlap_instance& inst);

// <phi| (r tensor id_H)(mu) |phi> for an operation r : K -> L.
double overlap_value(const overlap_instance& inst, const cp_map& r);

// Lambda = Tr sqrt(Y) with Y = Tr_H[mu_hat^2 (1 (x) phi_h)]. Satisfies
// Lambda <= Tr mu_hat, and Lambda bounds the maximum overlap from above.
double overlap_lambda(const overlap_instance& inst);

// Operation K -> L achieving at least Lambda^2 / Tr mu_hat:
//   v -> P_phi (Tr_K[(Y^{-1/2+} v Y^{-1/2+} (x) 1_H) mu_hat^2])^T P_phi^dag,
// with P_phi the target vector reshaped to dim_l x dim_h.
cp_map quadratic_overlapper(const overlap_instance& inst);

// Sandwich Lambda^2 / Tr mu_hat <= achieved <= optimum <= Lambda with the
// achieved leg evaluated on the quadratic overlapper.
bound_report overlap_bounds(const overlap_instance& inst);

// Tighter upper leg Lambda * ||(r^dag tensor id)(phi phi^dag)||_inf^{1/2}
// for a caller-supplied candidate operation.
double overlap_upper_refinement(const overlap_instance& inst, const cp_map& r);

// Closed-form two-sided bounds on the conditional min-entropy of a bipartite
// state, in bits, one report per exponent s in [0, 1]:
//   lower = -log2( sqrt(Tr rho_A^s) * g ),  upper = -log2( g^2 / Tr rho_A^{1-s} ),
// where g = Tr sqrt( Tr_A[ rho (rho_A^{-s} (x) 1) rho ] ) and rho_A^0 is the
// support projection.
min_entropy_report min_entropy_bounds(const cmat& rho_ab, Eigen::Index dim_a,
                                      Eigen::Index dim_b, double s);

// Discrimination as overlap: mu = Sum_k rho_k (x) |k><k|, phi the normalized
// double ket of the identity on the label space. The count-times-overlap of
// a measurement channel equals its success probability.
overlap_instance ensemble_to_overlap(const ensemble& e);

// Dilation of the guess map v -> phi_l^{-1+} Tr(v) on the canonical
// environment (dual L tensor K, dimension dim_l * dim_k). Generally not a
// contraction; one directional iteration step lands inside the unit ball.
cmat guess_dilation(const overlap_instance& inst);

// Operation induced by a dilation-shaped matrix u of shape
// (dim_l * dim_env) x dim_k with the environment index fastest.
cp_map contraction_to_map(const cmat& u, Eigen::Index dim_k,
                          Eigen::Index dim_l);

}  // namespace qbound

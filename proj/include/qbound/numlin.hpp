// Dense complex linear algebra: Hermitian spectral decompositions, pseudo
// powers restricted to the strictly positive eigenspace, norms, partial
// trace/transpose over tensor factorizations, and row-major double kets.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qbound/errors.hpp"

namespace qbound {

using cx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

// Eigenvalues ascending, matching eigenvectors as columns.
struct spectral_decomposition {
  rvec eigenvalues;
  cmat eigenvectors;
};

// Input checks. `where` names the calling operation in the error message.
bool all_finite(const cmat& a);
void require_finite(const cmat& a, const char* where);
void require_square(const cmat& a, const char* where);

// Largest singular value.
double operator_norm(const cmat& a);
// Sum of singular values.
double trace_norm(const cmat& a);

// Eigenvalues at or below dim * eps * max(largest eigenvalue, 1) count as
// zero. Shared by pseudo powers, PSD checks, and rank decisions.
double rank_cutoff(const rvec& eigenvalues, Eigen::Index dim);

// Rejects matrices with ||a - a^dag||_inf > 1e-10 * max(1, ||a||_inf), then
// returns the Hermitian average (a + a^dag) / 2.
cmat hermitian_part_checked(const cmat& a, const char* where);

// Spectral decomposition of the checked Hermitian part.
spectral_decomposition hermitian_eig(const cmat& a);

// Sum of lambda^exponent * P_lambda over eigenvalues above the rank cutoff.
// Negative and negligible eigenvalues are dropped, so exponent 0 gives the
// projection onto the strictly positive eigenspace and exponent 1 gives the
// positive part of a, not a itself.
cmat pseudo_power(const cmat& a, double exponent);
cmat positive_projection(const cmat& a);
cmat sqrt_psd(const cmat& a);

// Hermitian within tolerance and smallest eigenvalue >= -rank cutoff.
bool is_psd(const cmat& a);
void require_psd(const cmat& a, const char* where);

// Kronecker product, factor a slowest-varying.
cmat kron(const cmat& a, const cmat& b);

// Partial trace of an operator on the tensor product with the given factor
// dimensions (factor 0 slowest-varying). `keep` lists the factor indices that
// survive, in ascending order; the result lives on their tensor product in
// the original factor order.
cmat partial_trace(const cmat& a, const std::vector<Eigen::Index>& factors,
                   const std::vector<int>& keep);

// Transposes the single factor `which`, leaving the others untouched.
cmat partial_transpose(const cmat& a, const std::vector<Eigen::Index>& factors,
                       int which);

// Row-major flattening |a>> with the row index slowest, so that
// kron(x, conj(y)) * double_ket(c) = double_ket(x * c * y^dag).
cvec double_ket(const cmat& a);
cmat double_ket_inverse(const cvec& v, Eigen::Index rows, Eigen::Index cols);

// a * (a^dag a)^{-1/2+}: the contraction maximizing Re Tr(a^dag u), with the
// same null space as a.
cmat polar_isometry(const cmat& a);

}  // namespace qbound

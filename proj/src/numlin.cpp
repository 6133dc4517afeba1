#include "qbound/numlin.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qbound {

namespace {

constexpr double kHermTolScale = 1e-10;

std::string msg(const char* where, const char* what) {
  return std::string(where) + ": " + what;
}

// Offsets into the flat row/column index contributed by the selected factors,
// enumerated with the lowest selected factor slowest-varying.
std::vector<Eigen::Index> composite_offsets(
    const std::vector<Eigen::Index>& factors,
    const std::vector<Eigen::Index>& strides, const std::vector<int>& which) {
  Eigen::Index count = 1;
  for (int f : which) count *= factors[static_cast<std::size_t>(f)];
  std::vector<Eigen::Index> offsets(static_cast<std::size_t>(count));
  for (Eigen::Index c = 0; c < count; ++c) {
    Eigen::Index rem = c;
    Eigen::Index off = 0;
    for (std::size_t i = which.size(); i-- > 0;) {
      const auto f = static_cast<std::size_t>(which[i]);
      const Eigen::Index digit = rem % factors[f];
      rem /= factors[f];
      off += digit * strides[f];
    }
    offsets[static_cast<std::size_t>(c)] = off;
  }
  return offsets;
}

void check_factorization(const cmat& a, const std::vector<Eigen::Index>& factors,
                         const char* where) {
  require_square(a, where);
  if (factors.empty())
    throw dimension_mismatch(msg(where, "empty factor list"));
  Eigen::Index total = 1;
  for (Eigen::Index d : factors) {
    if (d < 1) throw dimension_mismatch(msg(where, "factor dimension < 1"));
    total *= d;
  }
  if (total != a.rows())
    throw dimension_mismatch(
        msg(where, "factor dimensions do not multiply to the matrix size"));
}

std::vector<Eigen::Index> factor_strides(const std::vector<Eigen::Index>& factors) {
  std::vector<Eigen::Index> strides(factors.size());
  Eigen::Index s = 1;
  for (std::size_t i = factors.size(); i-- > 0;) {
    strides[i] = s;
    s *= factors[i];
  }
  return strides;
}

}  // namespace

bool all_finite(const cmat& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        return false;
  return true;
}

void require_finite(const cmat& a, const char* where) {
  if (!all_finite(a)) throw non_finite_input(msg(where, "non-finite entry"));
}

void require_square(const cmat& a, const char* where) {
  if (a.rows() != a.cols())
    throw dimension_mismatch(msg(where, "matrix is not square"));
  if (a.rows() == 0) throw dimension_mismatch(msg(where, "empty matrix"));
}

double operator_norm(const cmat& a) {
  require_finite(a, "operator_norm");
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<cmat> svd(a);
  return svd.singularValues()(0);
}

double trace_norm(const cmat& a) {
  require_finite(a, "trace_norm");
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<cmat> svd(a);
  return svd.singularValues().sum();
}

double rank_cutoff(const rvec& eigenvalues, Eigen::Index dim) {
  const double top = eigenvalues.size() > 0 ? eigenvalues.maxCoeff() : 0.0;
  return static_cast<double>(dim) * std::numeric_limits<double>::epsilon() *
         std::max(top, 1.0);
}

cmat hermitian_part_checked(const cmat& a, const char* where) {
  require_finite(a, where);
  require_square(a, where);
  const double scale = std::max(1.0, operator_norm(a));
  if (operator_norm(a - a.adjoint()) > kHermTolScale * scale)
    throw invariant_violation(msg(where, "matrix is not Hermitian"));
  return 0.5 * (a + a.adjoint());
}

spectral_decomposition hermitian_eig(const cmat& a) {
  const cmat h = hermitian_part_checked(a, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<cmat> solver(h);
  if (solver.info() != Eigen::Success)
    throw convergence_failure("hermitian_eig: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

cmat pseudo_power(const cmat& a, double exponent) {
  if (!std::isfinite(exponent))
    throw non_finite_input("pseudo_power: non-finite exponent");
  const spectral_decomposition ed = hermitian_eig(a);
  const double cutoff = rank_cutoff(ed.eigenvalues, a.rows());
  rvec powered = rvec::Zero(ed.eigenvalues.size());
  for (Eigen::Index j = 0; j < ed.eigenvalues.size(); ++j)
    if (ed.eigenvalues(j) > cutoff)
      powered(j) = std::pow(ed.eigenvalues(j), exponent);
  return ed.eigenvectors * powered.asDiagonal() * ed.eigenvectors.adjoint();
}

cmat positive_projection(const cmat& a) { return pseudo_power(a, 0.0); }

cmat sqrt_psd(const cmat& a) { return pseudo_power(a, 0.5); }

bool is_psd(const cmat& a) {
  if (!all_finite(a) || a.rows() != a.cols() || a.rows() == 0) return false;
  const double scale = std::max(1.0, operator_norm(a));
  if (operator_norm(a - a.adjoint()) > kHermTolScale * scale) return false;
  Eigen::SelfAdjointEigenSolver<cmat> solver(0.5 * (a + a.adjoint()));
  if (solver.info() != Eigen::Success) return false;
  const rvec ev = solver.eigenvalues();
  return ev.minCoeff() >= -rank_cutoff(ev, a.rows());
}

void require_psd(const cmat& a, const char* where) {
  require_finite(a, where);
  require_square(a, where);
  const cmat h = hermitian_part_checked(a, where);
  Eigen::SelfAdjointEigenSolver<cmat> solver(h);
  if (solver.info() != Eigen::Success)
    throw convergence_failure(msg(where, "eigensolver failed to converge"));
  const rvec ev = solver.eigenvalues();
  if (ev.minCoeff() < -rank_cutoff(ev, a.rows()))
    throw not_psd(msg(where, "matrix is not positive semidefinite"));
}

cmat kron(const cmat& a, const cmat& b) {
  cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

cmat partial_trace(const cmat& a, const std::vector<Eigen::Index>& factors,
                   const std::vector<int>& keep) {
  check_factorization(a, factors, "partial_trace");
  std::vector<int> traced;
  for (int f = 0; f < static_cast<int>(factors.size()); ++f)
    if (std::find(keep.begin(), keep.end(), f) == keep.end())
      traced.push_back(f);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= static_cast<int>(factors.size()))
      throw dimension_mismatch("partial_trace: kept factor out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw dimension_mismatch("partial_trace: kept factors must ascend");
  }

  const auto strides = factor_strides(factors);
  const auto kept_off = composite_offsets(factors, strides, keep);
  const auto traced_off = composite_offsets(factors, strides, traced);

  const auto dim_kept = static_cast<Eigen::Index>(kept_off.size());
  cmat out = cmat::Zero(dim_kept, dim_kept);
  for (Eigen::Index r = 0; r < dim_kept; ++r)
    for (Eigen::Index c = 0; c < dim_kept; ++c) {
      cx sum = 0.0;
      for (const Eigen::Index t : traced_off)
        sum += a(kept_off[static_cast<std::size_t>(r)] + t,
                 kept_off[static_cast<std::size_t>(c)] + t);
      out(r, c) = sum;
    }
  return out;
}

cmat partial_transpose(const cmat& a, const std::vector<Eigen::Index>& factors,
                       int which) {
  check_factorization(a, factors, "partial_transpose");
  if (which < 0 || which >= static_cast<int>(factors.size()))
    throw dimension_mismatch("partial_transpose: factor index out of range");

  const auto strides = factor_strides(factors);
  const Eigen::Index d = factors[static_cast<std::size_t>(which)];
  const Eigen::Index stride = strides[static_cast<std::size_t>(which)];

  std::vector<int> others;
  for (int f = 0; f < static_cast<int>(factors.size()); ++f)
    if (f != which) others.push_back(f);
  const auto other_off = composite_offsets(factors, strides, others);

  cmat out(a.rows(), a.cols());
  for (const Eigen::Index ro : other_off)
    for (const Eigen::Index co : other_off)
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
          out(ro + i * stride, co + j * stride) =
              a(ro + j * stride, co + i * stride);
  return out;
}

cvec double_ket(const cmat& a) {
  require_finite(a, "double_ket");
  cvec v(a.rows() * a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  return v;
}

cmat double_ket_inverse(const cvec& v, Eigen::Index rows, Eigen::Index cols) {
  if (rows < 1 || cols < 1 || v.size() != rows * cols)
    throw dimension_mismatch(
        "double_ket_inverse: vector length does not match the shape");
  cmat a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = v(i * cols + j);
  return a;
}

cmat polar_isometry(const cmat& a) {
  require_finite(a, "polar_isometry");
  return a * pseudo_power(a.adjoint() * a, -0.5);
}

}  // namespace qbound

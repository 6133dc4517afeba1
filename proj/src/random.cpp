#include "qbound/random.hpp"

#include <cmath>

namespace qbound {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the log argument in (0, 1].
  const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
  const double t = kTwoPi * uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

cx rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

cmat rng::ginibre(Eigen::Index rows, Eigen::Index cols) {
  cmat g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = complex_normal();
  return g;
}

cmat rng::unitary(Eigen::Index dim) { return isometry(dim, dim); }

cmat rng::isometry(Eigen::Index rows, Eigen::Index cols) {
  if (rows < cols)
    throw dimension_mismatch("isometry: need at least as many rows as columns");
  const cmat g = ginibre(rows, cols);
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ() * cmat::Identity(rows, cols);
  const cmat r = qr.matrixQR().topRows(cols);
  // Fix the phase gauge so the decomposition (and hence the draw) is unique.
  for (Eigen::Index j = 0; j < cols; ++j) {
    const cx d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

cmat rng::density(Eigen::Index dim) {
  const cmat g = ginibre(dim, dim);
  cmat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

cvec rng::pure_state(Eigen::Index dim) {
  cvec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex_normal();
  return v / v.norm();
}

std::vector<double> rng::simplex(std::size_t count) {
  std::vector<double> p(count);
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - uniform());
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace qbound

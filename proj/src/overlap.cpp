#include "qbound/overlap.hpp"

#include <cmath>

namespace qbound {

namespace {

constexpr double kTol = 1e-10;

cmat hermitized(const cmat& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

void validate_overlap_instance(const overlap_instance& inst) {
  if (inst.dim_k < 1 || inst.dim_h < 1 || inst.dim_l < 1)
    throw dimension_mismatch("overlap_instance: dimensions must be at least 1");
  if (inst.mu.rows() != inst.dim_k * inst.dim_h ||
      inst.mu.cols() != inst.mu.rows())
    throw dimension_mismatch("overlap_instance: mu has the wrong shape");
  if (inst.phi.size() != inst.dim_l * inst.dim_h)
    throw dimension_mismatch("overlap_instance: phi has the wrong length");
  require_psd(inst.mu, "overlap_instance");
  for (Eigen::Index i = 0; i < inst.phi.size(); ++i)
    if (!std::isfinite(inst.phi(i).real()) || !std::isfinite(inst.phi(i).imag()))
      throw non_finite_input("overlap_instance: non-finite target entry");
  if (std::abs(inst.phi.norm() - 1.0) > kTol)
    throw normalization_error("overlap_instance: target vector is not unit norm");
}

hatted_instance hat(const overlap_instance& inst) {
  validate_overlap_instance(inst);
  const cmat phiphi = inst.phi * inst.phi.adjoint();
  hatted_instance out;
  out.phi_h = partial_trace(phiphi, {inst.dim_l, inst.dim_h}, {1});
  out.phi_l = partial_trace(phiphi, {inst.dim_l, inst.dim_h}, {0});
  const cmat proj =
      kron(cmat::Identity(inst.dim_k, inst.dim_k), positive_projection(out.phi_h));
  out.mu_hat = hermitized(proj * inst.mu * proj);
  return out;
}

double overlap_value(const overlap_instance& inst, const cp_map& r) {
  validate_overlap_instance(inst);
  validate_cp_map(r);
  if (r.dim_in != inst.dim_k || r.dim_out != inst.dim_l)
    throw dimension_mismatch("overlap_value: map does not match the instance");
  const cmat eye_h = cmat::Identity(inst.dim_h, inst.dim_h);
  cmat sigma = cmat::Zero(inst.dim_l * inst.dim_h, inst.dim_l * inst.dim_h);
  for (const cmat& f : r.kraus) {
    const cmat ext = kron(f, eye_h);
    sigma += ext * inst.mu * ext.adjoint();
  }
  const cx v = inst.phi.adjoint() * sigma * inst.phi;
  return v.real();
}

namespace {

// Y = Tr_H[mu_hat^2 (1 (x) phi_h)], the K-space weight whose square-root
// trace is the overlap Lambda.
cmat overlap_y(const overlap_instance& inst, const hatted_instance& h) {
  const cmat sq = h.mu_hat * h.mu_hat;
  const cmat big = sq * kron(cmat::Identity(inst.dim_k, inst.dim_k), h.phi_h);
  return hermitized(partial_trace(big, {inst.dim_k, inst.dim_h}, {0}));
}

}  // namespace

double overlap_lambda(const overlap_instance& inst) {
  const hatted_instance h = hat(inst);
  return sqrt_psd(overlap_y(inst, h)).trace().real();
}

cp_map quadratic_overlapper(const overlap_instance& inst) {
  const hatted_instance h = hat(inst);
  const cmat yinv = pseudo_power(overlap_y(inst, h), -0.5);
  if (yinv.isZero(0.0))
    throw degenerate_input("quadratic_overlapper: the weight Y vanishes");
  const cmat p = double_ket_inverse(inst.phi, inst.dim_l, inst.dim_h);
  const cmat eye_h = cmat::Identity(inst.dim_h, inst.dim_h);

  // Factor the map as a Kraus sum instead of assembling its Choi matrix
  // from the action: with G = mu_hat (Y^{-1/2+} (x) 1) the action equals
  // v -> sum_a K_a v K_a^dagger for K_a = P unvec(G row a)^T, and the
  // factored form stays completely positive under rounding even when Y is
  // nearly singular.
  const cmat g = h.mu_hat * kron(yinv, eye_h);
  cp_map out;
  out.dim_in = inst.dim_k;
  out.dim_out = inst.dim_l;
  for (Eigen::Index a = 0; a < g.rows(); ++a) {
    const cvec row = g.row(a).transpose();
    const cmat slice = double_ket_inverse(row, inst.dim_k, inst.dim_h);
    out.kraus.push_back(p * slice.transpose());
  }
  validate_quantum_operation(out);
  return out;
}

bound_report overlap_bounds(const overlap_instance& inst) {
  const hatted_instance h = hat(inst);
  const double tr_mu_hat = h.mu_hat.trace().real();
  const double lambda = sqrt_psd(overlap_y(inst, h)).trace().real();

  bound_report r;
  if (tr_mu_hat <= 0.0 || lambda <= 0.0) {
    r.lambda = 0.0;
    r.lambda_sq = 0.0;
    r.achieved = 0.0;
    r.upper = 0.0;
    return r;
  }
  r.lambda = lambda;
  r.lambda_sq = lambda * lambda / tr_mu_hat;
  r.achieved = overlap_value(inst, quadratic_overlapper(inst));
  r.upper = lambda;
  validate_bound_report(r, tr_mu_hat);
  return r;
}

double overlap_upper_refinement(const overlap_instance& inst, const cp_map& r) {
  validate_overlap_instance(inst);
  validate_quantum_operation(r);
  if (r.dim_in != inst.dim_k || r.dim_out != inst.dim_l)
    throw dimension_mismatch(
        "overlap_upper_refinement: map does not match the instance");
  const cmat phiphi = inst.phi * inst.phi.adjoint();
  const cmat eye_h = cmat::Identity(inst.dim_h, inst.dim_h);
  cmat pulled = cmat::Zero(inst.dim_k * inst.dim_h, inst.dim_k * inst.dim_h);
  for (const cmat& f : r.kraus) {
    const cmat ext = kron(f, eye_h);
    pulled += ext.adjoint() * phiphi * ext;
  }
  return overlap_lambda(inst) * std::sqrt(operator_norm(pulled));
}

min_entropy_report min_entropy_bounds(const cmat& rho_ab, Eigen::Index dim_a,
                                      Eigen::Index dim_b, double s) {
  if (dim_a < 1 || dim_b < 1)
    throw dimension_mismatch("min_entropy_bounds: dimensions must be at least 1");
  if (rho_ab.rows() != dim_a * dim_b || rho_ab.cols() != rho_ab.rows())
    throw dimension_mismatch("min_entropy_bounds: state has the wrong shape");
  if (!(s >= 0.0 && s <= 1.0))
    throw invariant_violation("min_entropy_bounds: s must lie in [0, 1]");
  require_psd(rho_ab, "min_entropy_bounds");
  if (std::abs(rho_ab.trace().real() - 1.0) > kTol)
    throw normalization_error("min_entropy_bounds: state trace is not 1");

  const std::vector<Eigen::Index> factors = {dim_a, dim_b};
  const cmat rho_a = partial_trace(rho_ab, factors, {0});
  const cmat weight = kron(pseudo_power(rho_a, -s), cmat::Identity(dim_b, dim_b));
  const cmat t = hermitized(partial_trace(rho_ab * weight * rho_ab, factors, {1}));
  const double g = sqrt_psd(t).trace().real();
  const double tr_s = pseudo_power(rho_a, s).trace().real();
  const double tr_1ms = pseudo_power(rho_a, 1.0 - s).trace().real();

  min_entropy_report out;
  out.s = s;
  out.lower = -std::log2(std::sqrt(tr_s) * g);
  out.upper = -std::log2(g * g / tr_1ms);
  if (out.lower > out.upper + 1e-9)
    throw invariant_violation("min_entropy_bounds: bounds crossed");
  return out;
}

overlap_instance ensemble_to_overlap(const ensemble& e) {
  validate_ensemble(e);
  const auto m = static_cast<Eigen::Index>(e.states.size());
  overlap_instance inst;
  inst.dim_k = e.dim;
  inst.dim_h = m;
  inst.dim_l = m;
  inst.mu = cmat::Zero(e.dim * m, e.dim * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    cmat label = cmat::Zero(m, m);
    label(k, k) = 1.0;
    inst.mu += kron(e.states[static_cast<std::size_t>(k)], label);
  }
  inst.phi = double_ket(cmat::Identity(m, m)) / std::sqrt(static_cast<double>(m));
  return inst;
}

cmat guess_dilation(const overlap_instance& inst) {
  const hatted_instance h = hat(inst);
  const cmat v = pseudo_power(h.phi_l, -0.5);
  const Eigen::Index env = inst.dim_l * inst.dim_k;
  cmat u = cmat::Zero(inst.dim_l * env, inst.dim_k);
  // Row (l, (l2, k2)) and column k carry v(l, l2) on the diagonal k2 = k.
  for (Eigen::Index l = 0; l < inst.dim_l; ++l)
    for (Eigen::Index l2 = 0; l2 < inst.dim_l; ++l2)
      for (Eigen::Index k = 0; k < inst.dim_k; ++k)
        u(l * env + l2 * inst.dim_k + k, k) = v(l, l2);
  return u;
}

cp_map contraction_to_map(const cmat& u, Eigen::Index dim_k,
                          Eigen::Index dim_l) {
  require_finite(u, "contraction_to_map");
  if (dim_k < 1 || dim_l < 1 || u.cols() != dim_k || u.rows() % dim_l != 0)
    throw dimension_mismatch("contraction_to_map: shape does not factor");
  const Eigen::Index env = u.rows() / dim_l;
  cp_map out;
  out.dim_in = dim_k;
  out.dim_out = dim_l;
  for (Eigen::Index e = 0; e < env; ++e) {
    cmat k(dim_l, dim_k);
    for (Eigen::Index l = 0; l < dim_l; ++l) k.row(l) = u.row(l * env + e);
    out.kraus.push_back(k);
  }
  return out;
}

}  // namespace qbound

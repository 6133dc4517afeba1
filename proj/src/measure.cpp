#include "qbound/measure.hpp"

#include <cmath>
#include <string>

namespace qbound {

namespace {

constexpr double kSumTol = 1e-10;

void check_arity(std::size_t got, std::size_t want, const char* where) {
  if (got != want)
    throw arity_error(std::string(where) +
                      ": element count does not match the ensemble");
}

void check_elements(const std::vector<cmat>& elements, Eigen::Index dim,
                    const char* where) {
  if (elements.empty())
    throw arity_error(std::string(where) + ": empty element list");
  for (const cmat& m : elements) {
    require_finite(m, where);
    if (m.rows() != dim || m.cols() != dim)
      throw dimension_mismatch(std::string(where) +
                               ": element dimension does not match");
  }
}

}  // namespace

void validate_bound_report(const bound_report& r, double lambda_cap,
                           double slack) {
  const bool ordered = r.lambda_sq <= r.achieved + slack &&
                       r.achieved <= r.upper + slack;
  const bool capped = r.lambda >= -slack && r.lambda <= lambda_cap + slack;
  bool oracle_ok = true;
  if (r.oracle_optimal) {
    oracle_ok = r.achieved <= *r.oracle_optimal + slack &&
                *r.oracle_optimal <= r.upper + slack;
  }
  if (!ordered || !capped || !oracle_ok)
    throw invariant_violation("bound_report: sandwich ordering violated");
}

void validate_ensemble(const ensemble& e) {
  if (e.dim < 1) throw dimension_mismatch("ensemble: dimension < 1");
  if (e.states.empty()) throw arity_error("ensemble: no states");
  double total = 0.0;
  for (const cmat& rho : e.states) {
    if (rho.rows() != e.dim || rho.cols() != e.dim)
      throw dimension_mismatch("ensemble: state dimension does not match");
    require_psd(rho, "ensemble");
    total += rho.trace().real();
  }
  if (std::abs(total - 1.0) > kSumTol)
    throw normalization_error("ensemble: state traces do not sum to 1");
}

void validate_povm(const povm& m) {
  if (m.dim < 1) throw dimension_mismatch("povm: dimension < 1");
  check_elements(m.elements, m.dim, "povm");
  cmat sum = cmat::Zero(m.dim, m.dim);
  for (const cmat& el : m.elements) {
    require_psd(el, "povm");
    sum += el;
  }
  Eigen::SelfAdjointEigenSolver<cmat> solver(sum - cmat::Identity(m.dim, m.dim));
  if (solver.info() != Eigen::Success)
    throw convergence_failure("povm: eigensolver failed to converge");
  if (solver.eigenvalues().maxCoeff() > kSumTol)
    throw invariant_violation("povm: element sum exceeds the identity");
}

povm induced_povm(const generalized_measurement& g) {
  check_elements(g.kraus, g.dim, "induced_povm");
  povm m;
  m.dim = g.dim;
  for (const cmat& e : g.kraus) m.elements.push_back(e.adjoint() * e);
  return m;
}

double p_succ(const ensemble& e, const std::vector<cmat>& elements) {
  validate_ensemble(e);
  check_arity(elements.size(), e.states.size(), "p_succ");
  check_elements(elements, e.dim, "p_succ");
  cx total = 0.0;
  for (std::size_t k = 0; k < elements.size(); ++k)
    total += (elements[k] * e.states[k]).trace();
  return total.real();
}

cx ensemble_inner_product(const ensemble& e, const std::vector<cmat>& f,
                          const std::vector<cmat>& g) {
  validate_ensemble(e);
  check_arity(f.size(), e.states.size(), "ensemble_inner_product");
  if (f.size() != g.size())
    throw length_mismatch("ensemble_inner_product: operator lists differ in length");
  cx total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k].cols() != e.dim || g[k].cols() != e.dim ||
        f[k].rows() != g[k].rows())
      throw dimension_mismatch("ensemble_inner_product: operator shape mismatch");
    total += (f[k].adjoint() * g[k] * e.states[k]).trace();
  }
  return total;
}

povm jrf_iterate(const ensemble& e, const std::vector<cmat>& elements) {
  validate_ensemble(e);
  check_arity(elements.size(), e.states.size(), "jrf_iterate");
  check_elements(elements, e.dim, "jrf_iterate");
  cmat s = cmat::Zero(e.dim, e.dim);
  for (std::size_t k = 0; k < elements.size(); ++k)
    s += e.states[k] * elements[k] * e.states[k];
  s = 0.5 * (s + s.adjoint());
  const cmat w = pseudo_power(s, -0.5);
  povm out;
  out.dim = e.dim;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    cmat m = w * e.states[k] * elements[k] * e.states[k] * w;
    out.elements.push_back(0.5 * (m + m.adjoint()));
  }
  return out;
}

generalized_measurement jrf_iterate(const ensemble& e,
                                    const generalized_measurement& g) {
  validate_ensemble(e);
  check_arity(g.kraus.size(), e.states.size(), "jrf_iterate");
  cmat s = cmat::Zero(e.dim, e.dim);
  for (std::size_t k = 0; k < g.kraus.size(); ++k) {
    if (g.kraus[k].cols() != e.dim)
      throw dimension_mismatch("jrf_iterate: measurement operator shape mismatch");
    s += e.states[k] * g.kraus[k].adjoint() * g.kraus[k] * e.states[k];
  }
  s = 0.5 * (s + s.adjoint());
  const cmat w = pseudo_power(s, -0.5);
  generalized_measurement out;
  out.dim = e.dim;
  for (std::size_t k = 0; k < g.kraus.size(); ++k)
    out.kraus.push_back(g.kraus[k] * e.states[k] * w);
  return out;
}

povm quadratic_measurement(const ensemble& e) {
  validate_ensemble(e);
  std::vector<cmat> ones(e.states.size(), cmat::Identity(e.dim, e.dim));
  return jrf_iterate(e, ones);
}

povm pretty_good_measurement(const ensemble& e) {
  validate_ensemble(e);
  cmat s = cmat::Zero(e.dim, e.dim);
  for (const cmat& rho : e.states) s += rho;
  const cmat w = pseudo_power(s, -0.5);
  povm out;
  out.dim = e.dim;
  for (const cmat& rho : e.states) {
    cmat m = w * rho * w;
    out.elements.push_back(0.5 * (m + m.adjoint()));
  }
  return out;
}

povm holevo_pure_measurement(const std::vector<double>& weights,
                             const std::vector<cvec>& vectors) {
  if (weights.size() != vectors.size())
    throw length_mismatch("holevo_pure_measurement: weight/vector count mismatch");
  if (vectors.empty())
    throw arity_error("holevo_pure_measurement: empty input");
  const Eigen::Index dim = vectors.front().size();
  double total = 0.0;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != dim)
      throw dimension_mismatch("holevo_pure_measurement: vector length mismatch");
    if (!std::isfinite(weights[k]) || weights[k] < 0.0)
      throw non_finite_input("holevo_pure_measurement: bad weight");
    if (std::abs(vectors[k].norm() - 1.0) > kSumTol)
      throw normalization_error("holevo_pure_measurement: vector is not unit norm");
    total += weights[k];
  }
  if (std::abs(total - 1.0) > kSumTol)
    throw normalization_error("holevo_pure_measurement: weights do not sum to 1");

  cmat w2 = cmat::Zero(dim, dim);
  for (std::size_t k = 0; k < vectors.size(); ++k)
    w2 += weights[k] * weights[k] * vectors[k] * vectors[k].adjoint();
  const cmat b = pseudo_power(w2, -0.5);
  povm out;
  out.dim = dim;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const cvec ek = b * (weights[k] * vectors[k]);
    out.elements.push_back(ek * ek.adjoint());
  }
  return out;
}

bound_report holevo_curlander_bounds(const ensemble& e) {
  validate_ensemble(e);
  cmat sq = cmat::Zero(e.dim, e.dim);
  for (const cmat& rho : e.states) sq += rho * rho;
  const double lambda = sqrt_psd(sq).trace().real();

  bound_report r;
  r.lambda = lambda;
  r.lambda_sq = lambda * lambda;
  r.achieved = p_succ(e, quadratic_measurement(e).elements);
  r.upper = lambda;
  if (e.states.size() == 2) r.oracle_optimal = helstrom_optimal(e).p_opt;
  validate_bound_report(r, 1.0);
  return r;
}

helstrom_result helstrom_optimal(const ensemble& e) {
  validate_ensemble(e);
  if (e.states.size() != 2)
    throw arity_error("helstrom_optimal: needs exactly two states");
  const cmat delta = e.states[0] - e.states[1];
  helstrom_result out;
  out.p_opt = 0.5 * (1.0 + trace_norm(delta));
  // Both projectors from one eigenbasis; subtracting from the identity
  // instead would amplify the basis orthonormality defect past the psd
  // validation cutoff.
  const spectral_decomposition ed = hermitian_eig(delta);
  const double cutoff = rank_cutoff(ed.eigenvalues, e.dim);
  cmat pi = cmat::Zero(e.dim, e.dim);
  cmat complement = cmat::Zero(e.dim, e.dim);
  for (Eigen::Index j = 0; j < ed.eigenvalues.size(); ++j) {
    const cmat dyad = ed.eigenvectors.col(j) * ed.eigenvectors.col(j).adjoint();
    if (ed.eigenvalues(j) > cutoff)
      pi += dyad;
    else
      complement += dyad;
  }
  out.measurement.dim = e.dim;
  out.measurement.elements = {pi, complement};
  return out;
}

}  // namespace qbound

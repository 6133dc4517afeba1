#include "qbound/iterate.hpp"

#include <cmath>

namespace qbound {

namespace {

constexpr double kFeasTol = 1e-10;
constexpr double kDegenerate = 1e-13;

cmat hermitized(const cmat& a) { return 0.5 * (a + a.adjoint()); }

// Gradient of the dilation seminorm at u: the matrix q with
// <a, u>_mu,phi = Tr(a^dag q) for all a, entry
//   q[(l,e),k] = Sum phi[(l,h)] conj(phi[(l',h')]) u[(l',e),k'] mu[(k',h'),(k,h)].
cmat overlap_gradient(const overlap_instance& inst, const cmat& u) {
  validate_overlap_instance(inst);
  require_finite(u, "overlap_iterate");
  if (u.cols() != inst.dim_k || u.rows() % inst.dim_l != 0 || u.rows() == 0)
    throw dimension_mismatch("overlap_iterate: dilation shape does not factor");
  const Eigen::Index env = u.rows() / inst.dim_l;
  const Eigen::Index dk = inst.dim_k;
  const Eigen::Index dh = inst.dim_h;
  const Eigen::Index dl = inst.dim_l;
  const cmat p = double_ket_inverse(inst.phi, dl, dh);

  // w[(l',e),(k',h')] = u[(l',e),k'] * conj(p[l',h'])
  cmat w(dl * env, dk * dh);
  for (Eigen::Index lp = 0; lp < dl; ++lp)
    for (Eigen::Index e = 0; e < env; ++e)
      for (Eigen::Index kp = 0; kp < dk; ++kp)
        for (Eigen::Index hp = 0; hp < dh; ++hp)
          w(lp * env + e, kp * dh + hp) =
              u(lp * env + e, kp) * std::conj(p(lp, hp));
  const cmat z = w * inst.mu;

  // Sum out l', keeping the environment row.
  cmat z2 = cmat::Zero(env, dk * dh);
  for (Eigen::Index lp = 0; lp < dl; ++lp) z2 += z.middleRows(lp * env, env);

  cmat q = cmat::Zero(dl * env, dk);
  for (Eigen::Index l = 0; l < dl; ++l)
    for (Eigen::Index e = 0; e < env; ++e)
      for (Eigen::Index k = 0; k < dk; ++k) {
        cx sum = 0.0;
        for (Eigen::Index h = 0; h < dh; ++h)
          sum += p(l, h) * z2(e, k * dh + h);
        q(l * env + e, k) = sum;
      }
  return q;
}

}  // namespace

void validate_rw_functional(const rw_functional& f) {
  if (f.dim_in < 1 || f.dim_out < 1)
    throw dimension_mismatch("rw_functional: dimensions must be at least 1");
  if (f.f.rows() != f.dim_in * f.dim_out || f.f.cols() != f.f.rows())
    throw dimension_mismatch("rw_functional: weight has the wrong shape");
  require_psd(f.f, "rw_functional");
}

double rw_value(const rw_functional& f, const cp_map& r) {
  validate_rw_functional(f);
  validate_cp_map(r);
  if (r.dim_in != f.dim_in || r.dim_out != f.dim_out)
    throw dimension_mismatch("rw_value: map does not match the functional");
  return (f.f * choi(r).m).trace().real();
}

cp_map rw_iterate(const rw_functional& f, const cp_map& r) {
  validate_rw_functional(f);
  validate_cp_map(r);
  if (r.dim_in != f.dim_in || r.dim_out != f.dim_out)
    throw dimension_mismatch("rw_iterate: map does not match the functional");
  const cmat frf = hermitized(f.f * choi(r).m * f.f);
  const cmat gamma =
      partial_trace(frf, {f.dim_out, f.dim_in}, {1});
  const cmat gi = kron(cmat::Identity(f.dim_out, f.dim_out),
                       pseudo_power(gamma, -0.5));
  choi_matrix next;
  next.dim_in = f.dim_in;
  next.dim_out = f.dim_out;
  next.m = hermitized(gi * frf * gi);
  cp_map out = map_from_choi(next);
  validate_quantum_operation(out);
  return out;
}

cmat overlap_iterate(const overlap_instance& inst, const cmat& u) {
  return polar_isometry(overlap_gradient(inst, u));
}

double overlap_seminorm_sq(const overlap_instance& inst, const cmat& u) {
  const cmat q = overlap_gradient(inst, u);
  return std::max((u.adjoint() * q).trace().real(), 0.0);
}

povm_iteration_result iterate_povm_to_convergence(const ensemble& e,
                                                  const std::vector<cmat>& start,
                                                  const run_config& cfg) {
  validate_ensemble(e);
  povm_iteration_result out;
  std::vector<cmat> current = start;

  bool feasible;
  {
    povm candidate{e.dim, current};
    try {
      validate_povm(candidate);
      feasible = true;
    } catch (const error&) {
      feasible = false;
    }
  }

  bool have_prev = false;
  double prev = 0.0;
  while (true) {
    cmat s = cmat::Zero(e.dim, e.dim);
    const double p = p_succ(e, current);
    for (std::size_t k = 0; k < current.size(); ++k)
      s += e.states[k] * current[k] * e.states[k];
    const double step_gain = sqrt_psd(hermitized(s)).trace().real();
    const double sem = std::sqrt(std::max(p, 0.0));

    if (feasible) {
      out.trace.seminorms.push_back(sem);
      out.trace.lambda_values.push_back(sem > 0.0 ? step_gain / sem : 0.0);
      if (have_prev && sem - prev <= cfg.tol) {
        out.trace.converged = true;
        out.trace.stop_reason = "tolerance";
        break;
      }
      have_prev = true;
      prev = sem;
    }
    if (out.trace.steps >= cfg.max_iters) {
      out.trace.stop_reason = "max_iters";
      break;
    }
    if (step_gain <= kDegenerate) {
      out.trace.stop_reason = "degenerate";
      break;
    }
    current = jrf_iterate(e, current).elements;
    feasible = true;
    ++out.trace.steps;
  }

  out.measurement.dim = e.dim;
  out.measurement.elements = current;
  return out;
}

rw_iteration_result rw_iterate_to_convergence(const rw_functional& f,
                                              const cp_map& start,
                                              const run_config& cfg) {
  validate_rw_functional(f);
  rw_iteration_result out;
  out.map = start;

  bool feasible = is_quantum_operation(start);
  const double scale =
      std::max(1.0, operator_norm(f.f)) *
      std::max(1.0, static_cast<double>(f.dim_in * f.dim_out));
  bool have_prev = false;
  double prev = 0.0;
  while (true) {
    const double value = rw_value(f, out.map);
    const cmat frf = hermitized(f.f * choi(out.map).m * f.f);
    const cmat gamma = partial_trace(frf, {f.dim_out, f.dim_in}, {1});
    const double step_gain = sqrt_psd(gamma).trace().real();
    const double sem = std::sqrt(std::max(value, 0.0));

    if (feasible) {
      out.trace.seminorms.push_back(sem);
      out.trace.lambda_values.push_back(sem > 0.0 ? step_gain / sem : 0.0);
      if (have_prev && sem - prev <= cfg.tol) {
        out.trace.converged = true;
        out.trace.stop_reason = "tolerance";
        break;
      }
      have_prev = true;
      prev = sem;
    }
    if (out.trace.steps >= cfg.max_iters) {
      out.trace.stop_reason = "max_iters";
      break;
    }
    if (step_gain <= kDegenerate * scale) {
      out.trace.stop_reason = "degenerate";
      break;
    }
    out.map = rw_iterate(f, out.map);
    feasible = true;
    ++out.trace.steps;
  }
  return out;
}

overlap_iteration_result overlap_iterate_to_convergence(
    const overlap_instance& inst, const cmat& start, const run_config& cfg) {
  overlap_iteration_result out;
  out.u = start;

  bool feasible = operator_norm(start) <= 1.0 + kFeasTol;
  bool have_prev = false;
  double prev = 0.0;
  while (true) {
    const cmat q = overlap_gradient(inst, out.u);
    const double sem =
        std::sqrt(std::max((out.u.adjoint() * q).trace().real(), 0.0));
    const double step_gain = trace_norm(q);

    if (feasible) {
      out.trace.seminorms.push_back(sem);
      out.trace.lambda_values.push_back(sem > 0.0 ? step_gain / sem : 0.0);
      if (have_prev && sem - prev <= cfg.tol) {
        out.trace.converged = true;
        out.trace.stop_reason = "tolerance";
        break;
      }
      have_prev = true;
      prev = sem;
    }
    if (out.trace.steps >= cfg.max_iters) {
      out.trace.stop_reason = "max_iters";
      break;
    }
    if (step_gain <= kDegenerate) {
      out.trace.stop_reason = "degenerate";
      break;
    }
    out.u = polar_isometry(q);
    feasible = true;
    ++out.trace.steps;
  }
  return out;
}

}  // namespace qbound

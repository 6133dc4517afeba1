#include <doctest.h>

#include <cmath>

#include "qbound/iterate.hpp"
#include "qbound/numlin.hpp"
#include "qbound/random.hpp"

using namespace qbound;

namespace {

ensemble random_ensemble(rng& gen, Eigen::Index dim, int count) {
  ensemble e;
  e.dim = dim;
  const std::vector<double> priors = gen.simplex(count);
  for (int k = 0; k < count; ++k)
    e.states.push_back(priors[k] * gen.density(dim));
  return e;
}

overlap_instance random_instance(rng& gen, Eigen::Index dk, Eigen::Index dh,
                                 Eigen::Index dl) {
  overlap_instance inst;
  inst.dim_k = dk;
  inst.dim_h = dh;
  inst.dim_l = dl;
  const cmat g = gen.ginibre(dk * dh, dk * dh);
  inst.mu = g * g.adjoint();
  inst.mu /= inst.mu.trace().real();
  inst.phi = gen.pure_state(dl * dh);
  return inst;
}

cp_map random_channel(rng& gen, Eigen::Index din, Eigen::Index dout,
                      Eigen::Index denv) {
  const cmat v = gen.isometry(dout * denv, din);
  cp_map a;
  a.dim_in = din;
  a.dim_out = dout;
  for (Eigen::Index e = 0; e < denv; ++e) {
    cmat k(dout, din);
    for (Eigen::Index l = 0; l < dout; ++l) k.row(l) = v.row(l * denv + e);
    a.kraus.push_back(k);
  }
  return a;
}

void check_monotone(const iteration_trace& t) {
  for (std::size_t i = 1; i < t.seminorms.size(); ++i)
    CHECK(t.seminorms[i] >= t.seminorms[i - 1] - 1e-12);
  CHECK(t.seminorms.size() == t.lambda_values.size());
  for (double v : t.lambda_values) CHECK(std::isfinite(v));
}

}  // namespace

TEST_SUITE("iterate") {

TEST_CASE("measurement iteration is monotone from the identity start") {
  rng gen(101);
  for (int trial = 0; trial < 10; ++trial) {
    const ensemble e = random_ensemble(gen, 2 + trial % 3, 2 + trial % 4);
    const std::vector<cmat> start(e.states.size(),
                                  cmat::Identity(e.dim, e.dim));
    run_config cfg;
    cfg.tol = 1e-13;
    cfg.max_iters = 40;
    const povm_iteration_result res = iterate_povm_to_convergence(e, start, cfg);
    check_monotone(res.trace);
    CHECK_NOTHROW(validate_povm(res.measurement));
    CHECK((res.trace.stop_reason == "tolerance" ||
           res.trace.stop_reason == "max_iters"));
  }
}

TEST_CASE("the infeasible identity start is recorded from the first iterate") {
  rng gen(102);
  const ensemble e = random_ensemble(gen, 3, 3);
  const std::vector<cmat> start(3, cmat::Identity(3, 3));
  run_config cfg;
  cfg.max_iters = 5;
  cfg.tol = 0.0;
  const povm_iteration_result res = iterate_povm_to_convergence(e, start, cfg);
  REQUIRE(!res.trace.seminorms.empty());
  const povm qw = quadratic_measurement(e);
  const double p_first = p_succ(e, qw.elements);
  CHECK(res.trace.seminorms.front() ==
        doctest::Approx(std::sqrt(p_first)).epsilon(1e-10));
}

TEST_CASE("a feasible start is recorded before any step") {
  rng gen(103);
  const ensemble e = random_ensemble(gen, 3, 3);
  const povm pgm = pretty_good_measurement(e);
  run_config cfg;
  cfg.max_iters = 3;
  const povm_iteration_result res =
      iterate_povm_to_convergence(e, pgm.elements, cfg);
  REQUIRE(!res.trace.seminorms.empty());
  CHECK(res.trace.seminorms.front() ==
        doctest::Approx(std::sqrt(p_succ(e, pgm.elements))).epsilon(1e-12));
}

TEST_CASE("two-state iteration converges to the oracle optimum") {
  rng gen(104);
  for (int trial = 0; trial < 5; ++trial) {
    const ensemble e = random_ensemble(gen, 2 + trial % 3, 2);
    const std::vector<cmat> start(2, cmat::Identity(e.dim, e.dim));
    run_config cfg;
    cfg.tol = 1e-14;
    cfg.max_iters = 200;
    const povm_iteration_result res = iterate_povm_to_convergence(e, start, cfg);
    const double limit = p_succ(e, res.measurement.elements);
    CHECK(limit == doctest::Approx(helstrom_optimal(e).p_opt).epsilon(1e-6));
  }
}

TEST_CASE("an orthogonal start degenerates immediately") {
  ensemble e;
  e.dim = 2;
  cmat s = cmat::Zero(2, 2);
  s(0, 0) = 1.0;
  e.states = {s};
  cmat m = cmat::Zero(2, 2);
  m(1, 1) = 1.0;
  run_config cfg;
  const povm_iteration_result res = iterate_povm_to_convergence(e, {m}, cfg);
  CHECK(res.trace.stop_reason == "degenerate");
  CHECK(!res.trace.converged);
  CHECK(res.trace.steps == 0);
  REQUIRE(!res.trace.seminorms.empty());
  CHECK(res.trace.seminorms.front() == 0.0);
}

TEST_CASE("a zero iteration budget stops with the budget reason") {
  rng gen(105);
  const ensemble e = random_ensemble(gen, 2, 2);
  const povm pgm = pretty_good_measurement(e);
  run_config cfg;
  cfg.max_iters = 0;
  const povm_iteration_result res =
      iterate_povm_to_convergence(e, pgm.elements, cfg);
  CHECK(res.trace.stop_reason == "max_iters");
  CHECK(res.trace.steps == 0);
}

TEST_CASE("functional-weighted iteration is monotone and stays feasible") {
  rng gen(106);
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Index din = 2 + trial % 2;
    const Eigen::Index dout = 2;
    rw_functional f;
    f.dim_in = din;
    f.dim_out = dout;
    const cmat g = gen.ginibre(din * dout, din * dout);
    f.f = g * g.adjoint();
    const cp_map start = random_channel(gen, din, dout, 2);

    run_config cfg;
    cfg.tol = 1e-13;
    cfg.max_iters = 40;
    const rw_iteration_result res = rw_iterate_to_convergence(f, start, cfg);
    check_monotone(res.trace);
    CHECK_NOTHROW(validate_quantum_operation(res.map));
  }
}

TEST_CASE("the identity channel is a fixed point of its own functional") {
  const Eigen::Index d = 2;
  rw_functional f;
  f.dim_in = d;
  f.dim_out = d;
  const cvec ket = double_ket(cmat::Identity(d, d));
  f.f = ket * ket.adjoint();
  const cp_map id = unitary_channel(cmat::Identity(d, d));
  CHECK(rw_value(f, id) == doctest::Approx(4.0).epsilon(1e-12));
  cp_map cur = id;
  for (int i = 0; i < 3; ++i) {
    cur = rw_iterate(f, cur);
    CHECK(rw_value(f, cur) == doctest::Approx(4.0).epsilon(1e-9));
  }
}

TEST_CASE("iteration toward the identity functional respects its maximum") {
  rng gen(107);
  const Eigen::Index d = 2;
  rw_functional f;
  f.dim_in = d;
  f.dim_out = d;
  const cvec ket = double_ket(cmat::Identity(d, d));
  f.f = ket * ket.adjoint();
  const cp_map start = random_channel(gen, d, d, 2);
  run_config cfg;
  cfg.tol = 1e-13;
  cfg.max_iters = 60;
  const rw_iteration_result res = rw_iterate_to_convergence(f, start, cfg);
  check_monotone(res.trace);
  REQUIRE(!res.trace.seminorms.empty());
  const double final_value = res.trace.seminorms.back();
  CHECK(final_value * final_value <= 4.0 + 1e-9);
}

TEST_CASE("a weight orthogonal to the start degenerates") {
  cmat x(2, 2);
  x << 0, 1, 1, 0;
  const cp_map start = unitary_channel(x);
  rw_functional f;
  f.dim_in = 2;
  f.dim_out = 2;
  f.f = cmat::Zero(4, 4);
  f.f(0, 0) = 1.0;
  run_config cfg;
  const rw_iteration_result res = rw_iterate_to_convergence(f, start, cfg);
  CHECK(res.trace.stop_reason == "degenerate");
  REQUIRE(!res.trace.seminorms.empty());
  CHECK(res.trace.seminorms.front() == 0.0);
}

TEST_CASE("overlap iteration from the guess is monotone and lands in the ball") {
  rng gen(108);
  for (int trial = 0; trial < 8; ++trial) {
    const overlap_instance inst =
        random_instance(gen, 2 + trial % 2, 2 + trial % 2, 2);
    const cmat start = guess_dilation(inst);
    run_config cfg;
    cfg.tol = 1e-13;
    cfg.max_iters = 40;
    const overlap_iteration_result res =
        overlap_iterate_to_convergence(inst, start, cfg);
    check_monotone(res.trace);
    CHECK(operator_norm(res.u) <= 1.0 + 1e-9);
    REQUIRE(!res.trace.seminorms.empty());
    const double last = res.trace.seminorms.back();
    CHECK(last * last <= overlap_lambda(inst) + 1e-9);
  }
}

TEST_CASE("the first step from the guess induces the quadratic overlapper") {
  rng gen(109);
  for (int trial = 0; trial < 5; ++trial) {
    const overlap_instance inst = random_instance(gen, 2 + trial % 2, 2, 2);
    const cmat u1 = overlap_iterate(inst, guess_dilation(inst));
    CHECK(operator_norm(u1) <= 1.0 + 1e-10);
    const cp_map induced = contraction_to_map(u1, inst.dim_k, inst.dim_l);
    const cp_map direct = quadratic_overlapper(inst);
    CHECK(operator_norm(choi(induced).m - choi(direct).m) < 1e-8);
  }
}

TEST_CASE("overlap seminorms agree with the value of the induced operation") {
  rng gen(110);
  const overlap_instance inst = random_instance(gen, 2, 3, 2);
  const cmat start = guess_dilation(inst);
  run_config cfg;
  cfg.tol = 1e-13;
  cfg.max_iters = 10;
  const overlap_iteration_result res =
      overlap_iterate_to_convergence(inst, start, cfg);
  const double sem_sq = overlap_seminorm_sq(inst, res.u);
  const double val =
      overlap_value(inst, contraction_to_map(res.u, inst.dim_k, inst.dim_l));
  CHECK(sem_sq == doctest::Approx(val).epsilon(1e-10));
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>

#include "qbound/channel.hpp"
#include "qbound/numlin.hpp"
#include "qbound/random.hpp"

using namespace qbound;

namespace {

// Random CP map with Kraus operators scaled so the total is a strict
// contraction, hence a valid operation.
cp_map random_operation(rng& gen, Eigen::Index din, Eigen::Index dout,
                        int count) {
  cp_map a;
  a.dim_in = din;
  a.dim_out = dout;
  for (int k = 0; k < count; ++k) a.kraus.push_back(gen.ginibre(dout, din));
  cmat total = cmat::Zero(din, din);
  for (const cmat& f : a.kraus) total += f.adjoint() * f;
  const double scale = std::sqrt(operator_norm(total)) * (1.0 + 1e-3);
  for (cmat& f : a.kraus) f /= scale;
  return a;
}

// Random channel from a Haar isometry split into Kraus blocks.
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

double choi_distance(const choi_matrix& a, const choi_matrix& b) {
  return operator_norm(a.m - b.m);
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("depolarizing acts as the convex mixture with the mixed state") {
  rng gen(51);
  for (Eigen::Index d : {2, 3}) {
    const cp_map a = depolarizing(0.3, d);
    CHECK(is_channel(a));
    const cmat x = gen.ginibre(d, d);
    const cmat want =
        0.7 * x + 0.3 * (x.trace() / double(d)) * cmat::Identity(d, d);
    CHECK(operator_norm(qbound::apply(a, x) - want) < 1e-12);
  }
  CHECK_THROWS_AS(depolarizing(1.5, 2), normalization_error);
  CHECK_THROWS_AS(depolarizing(-0.1, 2), normalization_error);
}

TEST_CASE("amplitude damping acts by the textbook matrix") {
  rng gen(52);
  const double gamma = 0.37;
  const cp_map a = amplitude_damping(gamma);
  CHECK(is_channel(a));
  const cmat rho = gen.density(2);
  cmat want(2, 2);
  want(0, 0) = rho(0, 0) + gamma * rho(1, 1);
  want(0, 1) = std::sqrt(1.0 - gamma) * rho(0, 1);
  want(1, 0) = std::sqrt(1.0 - gamma) * rho(1, 0);
  want(1, 1) = (1.0 - gamma) * rho(1, 1);
  CHECK(operator_norm(qbound::apply(a, rho) - want) < 1e-12);
}

TEST_CASE("unitary channel requires a unitary") {
  rng gen(53);
  const cmat u = gen.unitary(3);
  const cp_map a = unitary_channel(u);
  const cmat x = gen.ginibre(3, 3);
  CHECK(operator_norm(qbound::apply(a, x) - u * x * u.adjoint()) < 1e-12);
  CHECK_THROWS_AS(unitary_channel(gen.ginibre(3, 3) * 2.0), invariant_violation);
}

TEST_CASE("operation validation distinguishes trace behavior") {
  rng gen(54);
  const cp_map op = random_operation(gen, 3, 2, 4);
  CHECK_NOTHROW(validate_quantum_operation(op));
  CHECK(is_quantum_operation(op));
  CHECK(!is_channel(op));

  cp_map expanding = op;
  for (cmat& f : expanding.kraus) f *= 2.0;
  CHECK_NOTHROW(validate_cp_map(expanding));
  CHECK(!is_quantum_operation(expanding));
  CHECK_THROWS_AS(validate_quantum_operation(expanding), invariant_violation);
}

TEST_CASE("adjoint pairing holds for random maps") {
  rng gen(55);
  const cp_map a = random_operation(gen, 3, 2, 3);
  const cmat x = gen.ginibre(3, 3);
  const cmat y = gen.ginibre(2, 2);
  const cx lhs = (y.adjoint() * qbound::apply(a, x)).trace();
  const cx rhs = (adjoint_apply(a, y).adjoint() * x).trace();
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("choi matrix has unit-preserving trace and the block layout") {
  rng gen(56);
  const cp_map a = random_channel(gen, 3, 2, 4);
  const choi_matrix c = choi(a);
  CHECK(c.m.rows() == 6);
  CHECK(std::abs(c.m.trace() - cx(3.0, 0.0)) < 1e-10);
  // Entry [(l,i),(l',j)] equals map(|i><j|)[l,l'].
  cmat unit = cmat::Zero(3, 3);
  unit(1, 2) = 1.0;
  const cmat block = qbound::apply(a, unit);
  for (Eigen::Index l = 0; l < 2; ++l)
    for (Eigen::Index lp = 0; lp < 2; ++lp)
      CHECK(std::abs(c.m(l * 3 + 1, lp * 3 + 2) - block(l, lp)) < 1e-12);
}

TEST_CASE("choi round trip reproduces the map with a compact kraus list") {
  rng gen(57);
  const cp_map a = random_operation(gen, 3, 4, 9);
  const cp_map b = map_from_choi(choi(a));
  CHECK(b.kraus.size() <= std::size_t(3 * 4));
  CHECK(choi_distance(choi(a), choi(b)) < 1e-10);
  const cmat x = gen.ginibre(3, 3);
  CHECK(operator_norm(qbound::apply(a, x) - qbound::apply(b, x)) < 1e-10);
}

TEST_CASE("applying through the choi matrix matches kraus application") {
  rng gen(58);
  const cp_map a = random_operation(gen, 4, 2, 5);
  const choi_matrix c = choi(a);
  const cmat x = gen.ginibre(4, 4);
  CHECK(operator_norm(apply_choi(c, x) - qbound::apply(a, x)) < 1e-10);
}

TEST_CASE("choi from an action functional matches the direct construction") {
  rng gen(59);
  const cp_map a = random_operation(gen, 3, 2, 3);
  const choi_matrix c = choi_from_action(
      [&a](const cmat& x) { return qbound::apply(a, x); }, a.dim_in, a.dim_out);
  CHECK(choi_distance(c, choi(a)) < 1e-10);
}

TEST_CASE("map from a non-psd choi matrix is rejected") {
  choi_matrix c;
  c.dim_in = 2;
  c.dim_out = 2;
  c.m = -cmat::Identity(4, 4);
  CHECK_THROWS_AS(map_from_choi(c), not_psd);
}

TEST_CASE("canonical dilation is isometric for channels and recovers them") {
  rng gen(60);
  const cp_map a = random_channel(gen, 3, 2, 3);
  const stinespring_dilation st = canonical_stinespring(a);
  CHECK(st.dim_env == a.dim_in * a.dim_out);
  CHECK(st.u.rows() == a.dim_out * st.dim_env);
  CHECK(operator_norm(st.u.adjoint() * st.u - cmat::Identity(3, 3)) < 1e-10);

  const cmat rho = gen.density(3);
  const cmat big = st.u * rho * st.u.adjoint();
  const cmat reduced =
      partial_trace(big, {a.dim_out, st.dim_env}, {0});
  CHECK(operator_norm(reduced - qbound::apply(a, rho)) < 1e-10);
}

TEST_CASE("dilation of a contraction squares to the kraus total") {
  rng gen(61);
  const cp_map a = random_operation(gen, 3, 3, 4);
  cmat total = cmat::Zero(3, 3);
  for (const cmat& f : a.kraus) total += f.adjoint() * f;
  const stinespring_dilation st = canonical_stinespring(a);
  CHECK(operator_norm(st.u.adjoint() * st.u - total) < 1e-10);
}

TEST_CASE("state-adapted kraus operators are orthonormal and reconstruct") {
  rng gen(62);
  const cp_map a = random_channel(gen, 3, 3, 2);
  const cmat rho = gen.density(3);
  const rho_kraus_decomposition dec = rho_kraus(a, rho);
  REQUIRE(!dec.weights.empty());
  for (std::size_t k = 1; k < dec.weights.size(); ++k)
    CHECK(dec.weights[k] <= dec.weights[k - 1] + 1e-15);
  double wsum = 0.0;
  for (double w : dec.weights) wsum += w;
  CHECK(wsum == doctest::Approx(qbound::apply(a, rho).trace().real()).epsilon(1e-10));

  for (std::size_t k = 0; k < dec.operators.size(); ++k)
    for (std::size_t l = 0; l < dec.operators.size(); ++l) {
      const cx ip =
          (dec.operators[k].adjoint() * dec.operators[l] * rho).trace();
      const double want = k == l ? 1.0 : 0.0;
      CHECK(std::abs(ip - cx(want, 0.0)) < 1e-9);
    }

  // Full-rank base state, so the reconstruction holds on everything.
  const cmat mu = gen.ginibre(3, 3);
  cmat rebuilt = cmat::Zero(3, 3);
  for (std::size_t k = 0; k < dec.operators.size(); ++k)
    rebuilt += dec.weights[k] * dec.operators[k] * mu * dec.operators[k].adjoint();
  CHECK(operator_norm(rebuilt - qbound::apply(a, mu)) < 1e-9);

  CHECK_THROWS_AS(rho_kraus(a, 2.0 * rho), normalization_error);
}

TEST_CASE("functional calculus matches the spectral contraction oracle") {
  rng gen(63);
  const cp_map a = random_channel(gen, 3, 2, 3);
  const cmat rho = gen.density(3);

  // Oracle: act with f on the spectrum of (map tensor id)|sqrt rho>><<sqrt rho|
  // and contract against the conjugated normalized argument from the left.
  const cvec psi = double_ket(sqrt_psd(rho));
  cmat big = cmat::Zero(6, 6);
  for (const cmat& f : a.kraus) {
    const cvec v = kron(f, cmat::Identity(3, 3)) * psi;
    big += v * v.adjoint();
  }
  const spectral_decomposition ed = hermitian_eig(big);
  const double cutoff = rank_cutoff(ed.eigenvalues, big.rows());

  const cmat mu = [&gen] {
    const cmat g = gen.ginibre(3, 3);
    return cmat(0.5 * (g + g.adjoint()));
  }();
  const cmat x = pseudo_power(rho, -0.5) * mu * pseudo_power(rho, -0.5);

  for (const auto& f : {std::function<double(double)>(
                            [](double w) { return std::sqrt(w); }),
                        std::function<double(double)>(
                            [](double w) { return w * w; })}) {
    cmat fbig = cmat::Zero(6, 6);
    for (Eigen::Index t = 0; t < ed.eigenvalues.size(); ++t) {
      if (ed.eigenvalues(t) <= cutoff) continue;
      fbig += f(ed.eigenvalues(t)) * ed.eigenvectors.col(t) *
              ed.eigenvectors.col(t).adjoint();
    }
    const cmat want = partial_trace(
        cmat(kron(cmat::Identity(2, 2), x.conjugate()) * fbig), {2, 3}, {0});

    const cp_map fa = functional_calculus(a, rho, f);
    CHECK(operator_norm(qbound::apply(fa, mu) - want) < 1e-8);
  }
}

TEST_CASE("quadratic reweighting equals the squared functional calculus") {
  rng gen(64);
  const cp_map a = random_operation(gen, 3, 2, 4);
  const cmat rho = gen.density(3);
  const cp_map via_gram = quadratic_reweighting(a, rho);
  const cp_map via_spectrum =
      functional_calculus(a, rho, [](double w) { return w * w; });
  CHECK(choi_distance(choi(via_gram), choi(via_spectrum)) < 1e-10);
}

TEST_CASE("entanglement fidelity matches the purification overlap") {
  rng gen(65);
  const cp_map a = random_operation(gen, 3, 3, 3);
  const cmat rho = gen.density(3);
  const cvec psi = double_ket(sqrt_psd(rho));
  cx overlap = 0.0;
  for (const cmat& f : a.kraus) {
    const cx amp = psi.adjoint() * (kron(f, cmat::Identity(3, 3)) * psi);
    overlap += amp * std::conj(amp);
  }
  CHECK(entanglement_fidelity(rho, a) ==
        doctest::Approx(overlap.real()).epsilon(1e-10));

  // Mixed-state closed form for depolarizing noise.
  for (double q : {0.2, 0.7}) {
    const double want = 1.0 - q + q / 4.0;
    CHECK(entanglement_fidelity(0.5 * cmat::Identity(2, 2), depolarizing(q, 2)) ==
          doctest::Approx(want).epsilon(1e-12));
  }

  CHECK_THROWS_AS(entanglement_fidelity(gen.density(3), random_operation(gen, 3, 2, 2)),
                  dimension_mismatch);
  CHECK_THROWS_AS(entanglement_fidelity(2.0 * gen.density(3), a),
                  normalization_error);
}

TEST_CASE("composition acts sequentially and recompresses long lists") {
  rng gen(66);
  const cp_map first = random_operation(gen, 3, 4, 5);
  const cp_map second = random_operation(gen, 4, 2, 5);
  const cp_map both = compose(second, first);
  CHECK(both.dim_in == 3);
  CHECK(both.dim_out == 2);
  CHECK(both.kraus.size() <= std::size_t(3 * 2));
  const cmat x = gen.ginibre(3, 3);
  CHECK(operator_norm(qbound::apply(both, x) - qbound::apply(second, qbound::apply(first, x))) < 1e-10);

  CHECK_THROWS_AS(compose(first, second), dimension_mismatch);
}

TEST_CASE("depolarizing maps compose by the complementary product rule") {
  const double p = 0.4;
  const double q = 0.25;
  const cp_map both = compose(depolarizing(q, 3), depolarizing(p, 3));
  const cp_map want = depolarizing(q + p - q * p, 3);
  CHECK(choi_distance(choi(both), choi(want)) < 1e-10);
}

TEST_CASE("quadratic recovery of depolarizing noise is depolarizing") {
  for (Eigen::Index d : {2, 3}) {
    for (double p : {0.2, 0.5, 0.8}) {
      const cp_map a = depolarizing(p, d);
      const cmat mixed = cmat::Identity(d, d) / double(d);
      const cp_map rec = quadratic_recovery(a, mixed);
      const double f =
          p * p / ((1.0 - p) * (1.0 - p) * double(d * d) + (2.0 - p) * p);
      CHECK(choi_distance(choi(rec), choi(depolarizing(f, d))) < 1e-9);
      CHECK(f <= p * p + 1e-15);
    }
  }
  // Reference point: p = 1/2 on a qubit reverses to strength 1/7 and the
  // composite entanglement fidelity is 4/7.
  const cp_map a = depolarizing(0.5, 2);
  const cmat mixed = 0.5 * cmat::Identity(2, 2);
  const cp_map rec = quadratic_recovery(a, mixed);
  CHECK(choi_distance(choi(rec), choi(depolarizing(1.0 / 7.0, 2))) < 1e-10);
  CHECK(entanglement_fidelity(mixed, compose(rec, a)) ==
        doctest::Approx(4.0 / 7.0).epsilon(1e-10));
}

TEST_CASE("recoveries of a unitary channel are perfect") {
  rng gen(67);
  const cp_map a = unitary_channel(gen.unitary(3));
  const cmat rho = gen.density(3);
  for (const cp_map& rec :
       {quadratic_recovery(a, rho), barnum_knill_recovery(a, rho)}) {
    CHECK_NOTHROW(validate_quantum_operation(rec));
    CHECK(entanglement_fidelity(rho, compose(rec, a)) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("transpose channel is the recovery at the maximally mixed state") {
  rng gen(68);
  const cp_map a = random_channel(gen, 3, 3, 2);
  const cmat mixed = cmat::Identity(3, 3) / 3.0;
  CHECK(choi_distance(choi(transpose_channel(a)),
                      choi(barnum_knill_recovery(a, mixed))) < 1e-10);
}

TEST_CASE("recovery bounds sandwich the achieved fidelity") {
  rng gen(69);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const cp_map a = random_channel(gen, d, d, 2 + trial % 2);
    const cmat rho = gen.density(d);
    const bound_report r = recovery_bounds(a, rho);
    CHECK(r.lambda_sq <= r.achieved + 1e-9);
    CHECK(r.achieved <= r.upper + 1e-9);
    CHECK(r.upper <= qbound::apply(a, rho).trace().real() + 1e-9);
  }
}

TEST_CASE("recovery tightness against the simpler recoveries") {
  rng gen(70);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const cp_map a = random_channel(gen, d, d, 2);
    const cmat rho = gen.density(d);
    const double best = entanglement_fidelity(rho, compose(quadratic_recovery(a, rho), a));
    for (const cp_map& rec :
         {barnum_knill_recovery(a, rho), transpose_channel(a)}) {
      const double f = entanglement_fidelity(rho, compose(rec, a));
      CHECK(best >= f * f - 1e-9);
    }
  }
}

TEST_CASE("measurement channel stores outcome probabilities on the diagonal") {
  rng gen(71);
  povm m;
  m.dim = 3;
  const cmat g1 = gen.ginibre(3, 3);
  cmat m1 = g1 * g1.adjoint();
  m1 /= operator_norm(m1) * 1.5;
  m.elements = {m1, cmat(cmat::Identity(3, 3) - m1)};
  const cp_map a = measurement_channel(m);
  CHECK(a.dim_in == 3);
  CHECK(a.dim_out == 2);
  CHECK(is_channel(a));
  const cmat rho = gen.density(3);
  const cmat out = qbound::apply(a, rho);
  for (std::size_t k = 0; k < m.elements.size(); ++k) {
    const double want = (m.elements[k] * rho).trace().real();
    CHECK(std::abs(out(Eigen::Index(k), Eigen::Index(k)) - cx(want, 0.0)) <
          1e-10);
  }
  CHECK(std::abs(out(0, 1)) < 1e-10);
}

}  // TEST_SUITE

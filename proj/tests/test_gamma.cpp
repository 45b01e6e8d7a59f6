#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "mvlab/gamma.hpp"

using namespace mvlab;

namespace {
const ModularGrid g48 = make_grid(48, 8);
}

TEST_CASE("weight validation: the named weights and the failing cosine") {
  const WeightValidation v2 = validate_weight(named_weight("cos2", g48), g48, 2, Axis::Theta);
  CHECK(v2.pass);
  CHECK(v2.root_branch == 1);  // c_1 = -1

  const WeightValidation v3 = validate_weight(named_weight("exp3", g48), g48, 3, Axis::Theta);
  CHECK(v3.pass);
  CHECK(v3.root_branch == 1);  // c_n = exp(2 pi i n / 3)

  const WeightValidation bad = validate_weight(named_weight("cos1", g48), g48, 3, Axis::Theta);
  CHECK_FALSE(bad.pass);
  CHECK(bad.roots_residual > 0.1);

  CHECK_THROWS_AS(validate_weight(named_weight("cos2", g48), g48, 5, Axis::Theta),
                  std::invalid_argument);
}

TEST_CASE("generalized Gell-Mann generators") {
  // d = 2 reproduces the Pauli triple under the documented index map
  CHECK((gellmann(2, pauli_index_map(1)) - (MatrixXcd(2, 2) << 1, 0, 0, -1).finished()).norm() <
        1e-15);
  CHECK((gellmann(2, pauli_index_map(2)) - (MatrixXcd(2, 2) << 0, 1, 1, 0).finished()).norm() <
        1e-15);
  CHECK((gellmann(2, pauli_index_map(3)) -
         (MatrixXcd(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished())
            .norm() < 1e-15);

  // d = 3 diagonal generators have the two standard patterns
  const MatrixXcd l3 = gellmann(3, 3), l8 = gellmann(3, 8);
  CHECK(std::abs(l3(0, 0).real() - 1.0) < 1e-15);
  CHECK(std::abs(l3(1, 1).real() + 1.0) < 1e-15);
  CHECK(std::abs(l8(2, 2).real() + 2.0 / std::sqrt(3.0)) < 1e-15);

  for (int d = 2; d <= 5; ++d) {
    for (int a = 1; a <= gellmann_count(d); ++a) {
      const MatrixXcd ga = gellmann(d, a);
      CHECK(std::abs(ga.trace()) < 1e-14);
      CHECK((ga - ga.adjoint()).norm() < 1e-14);
      for (int b = 1; b <= gellmann_count(d); ++b) {
        const double expected = (a == b) ? 2.0 : 0.0;
        CHECK(std::abs((gellmann(d, a) * gellmann(d, b)).trace().real() - expected) < 1e-12);
      }
    }
    CHECK_THROWS_AS(gellmann(d, d * d), std::invalid_argument);
  }
}

TEST_CASE("build_gamma: blockwise weight times generator") {
  const WeightSpec w = make_weight(named_weight("cos2", g48), g48, 2, Axis::Theta);
  const ConventionTable t = build_convention_table(g48, 2, Axis::Theta);
  const BlockOperator gamma1 = build_gamma(w, pauli_index_map(1), t);

  CHECK(hermiticity_residual(gamma1) < 1e-12);
  for (const auto& b : gamma1.blocks) CHECK(std::abs(b.trace()) < 1e-12);

  // block eigenvalues are +-cos(theta_bar - k_bar pi) at every fundamental point
  for (int jf = 0; jf < gamma1.fund_theta_count(); ++jf)
    for (int lf = 0; lf < gamma1.fund_k_count(); ++lf) {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gamma1.blocks[gamma1.fund_index(jf, lf)]);
      const double zeta = std::cos(g48.theta_bar(jf) - kPi * g48.k_bar(lf));
      CHECK(es.eigenvalues()(1) == doctest::Approx(std::abs(zeta)).epsilon(1e-10));
      CHECK(es.eigenvalues()(0) == doctest::Approx(-std::abs(zeta)).epsilon(1e-10));
    }

  // zero weight gives the zero operator (trivial branch-0 validation)
  const BlockOperator zero = build_gamma(g48, 2, 1, WeightTable::Zero(48, 8), Axis::Theta);
  CHECK(block_frobenius_norm(zero) == 0.0);
}

TEST_CASE("build_delta and its decomposition") {
  const ConventionTable t3 = build_convention_table(g48, 3, Axis::Theta);

  // F = 1 gives the identity
  const BlockOperator one = build_delta(g48, named_weight("const1", g48), 3, Axis::Theta);
  double dev = 0.0;
  for (const auto& b : one.blocks) dev = std::max(dev, (b - MatrixXcd::Identity(3, 3)).norm());
  CHECK(dev == 0.0);

  // real F gives a hermitian operator
  const BlockOperator real_delta = build_delta(g48, named_weight("cos2", g48), 2, Axis::Theta);
  CHECK(hermiticity_residual(real_delta) == 0.0);

  // exp3: Delta = Gamma_3 + i Gamma_8 with traceless diagonal blocks
  const BlockOperator delta = build_delta(g48, named_weight("exp3", g48), 3, Axis::Theta);
  const DeltaDecomposition dec = decompose_delta(delta, t3);
  CHECK(dec.identity_residual < 1e-10);
  CHECK(dec.reconstruction_residual < 1e-10);

  // a branch-0 weight leaves an identity component
  const BlockOperator flat = build_delta(g48, named_weight("const1", g48), 3, Axis::Theta);
  CHECK(decompose_delta(flat, t3).identity_residual == doctest::Approx(1.0));
}

TEST_CASE("build_shift: cyclic order and unitarity") {
  const WeightTable ones = named_weight("const1", g48);
  const BlockOperator s2 = build_shift(g48, 2, ones, Axis::Theta);
  const BlockOperator s2sq = block_product(s2, s2);
  double dev = 0.0;
  for (const auto& b : s2sq.blocks) dev = std::max(dev, (b - MatrixXcd::Identity(2, 2)).norm());
  CHECK(dev < 1e-12);

  const BlockOperator s3 = build_shift(g48, 3, ones, Axis::Theta);
  const BlockOperator s3cube = block_product(s3, block_product(s3, s3));
  dev = 0.0;
  for (const auto& b : s3cube.blocks) dev = std::max(dev, (b - MatrixXcd::Identity(3, 3)).norm());
  CHECK(dev < 1e-12);

  // |f| = 1 makes S unitary
  const BlockOperator s_phase = build_shift(g48, 2, named_weight("exp3", g48), Axis::Theta);
  for (const auto& b : s_phase.blocks)
    CHECK((b * b.adjoint() - MatrixXcd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("gamma_from_SD") {
  const WeightTable cos2 = named_weight("cos2", g48);
  const BlockOperator delta = build_delta(g48, cos2, 2, Axis::Theta);
  const BlockOperator identity = build_shift(g48, 2, WeightTable::Zero(48, 8), Axis::Theta);

  // S = I: Gamma = 2 Delta for real diagonals
  BlockOperator eye = make_block_operator(g48, 2, Axis::Theta);
  for (auto& b : eye.blocks) b = MatrixXcd::Identity(2, 2);
  const BlockOperator doubled = gamma_from_SD(eye, delta);
  double dev = 0.0;
  for (size_t i = 0; i < doubled.blocks.size(); ++i)
    dev = std::max(dev, (doubled.blocks[i] - 2.0 * delta.blocks[i]).norm());
  CHECK(dev < 1e-14);

  // cyclic S with a validated diagonal: block-offdiagonal hermitian result
  const BlockOperator shift = build_shift(g48, 2, named_weight("const1", g48), Axis::Theta);
  const BlockOperator gamma = gamma_from_SD(shift, delta);
  CHECK(hermiticity_residual(gamma) < 1e-14);
  for (const auto& b : gamma.blocks) {
    CHECK(std::abs(b(0, 0)) < 1e-14);
    CHECK(std::abs(b(1, 1)) < 1e-14);
  }
  // equals build_gamma with a derived weight: the (1,0) entry carries it
  const ConventionTable t = build_convention_table(g48, 2, Axis::Theta);
  for (int f = 0; f < gamma.fund_count(); ++f) {
    const MatrixXcd conv = to_convention_block(t, gamma.blocks[f], f);
    CHECK(std::abs(conv(1, 0) - std::conj(conv(0, 1))) < 1e-14);
  }
  (void)identity;
}

TEST_CASE("gamma_via_gates: recorded profiles under the fixed convention") {
  const GateGammaReport r1 = gamma_via_gates(g48, 2, 1);
  CHECK(r1.off_block_residual < 1e-10);
  CHECK(r1.structure_residual < 1e-8);
  CHECK(r1.standard_alpha == 3);  // diagonal pattern
  for (int jf = 0; jf < r1.op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < r1.op.fund_k_count(); ++lf)
      CHECK(r1.weight(r1.op.fund_index(jf, lf)) ==
            doctest::Approx(2.0 * std::cos(g48.theta_bar(jf))).epsilon(1e-9));

  const GateGammaReport r3 = gamma_via_gates(g48, 2, 3);
  CHECK(r3.off_block_residual < 1e-10);
  CHECK(r3.structure_residual < 1e-8);
  CHECK(r3.standard_alpha == 2);  // imaginary swap
  const GateGammaReport r2 = gamma_via_gates(g48, 2, 2);
  CHECK(r2.standard_alpha == 1);  // real swap
  CHECK(r2.structure_residual < 1e-8);
  // both conjugated recipes carry the gate-native envelope 2 cos(theta + pi k)
  for (int jf = 0; jf < r3.op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < r3.op.fund_k_count(); ++lf) {
      const double env = 2.0 * std::cos(g48.theta_bar(jf) + kPi * g48.k_bar(lf));
      CHECK(r3.weight(r3.op.fund_index(jf, lf)) == doctest::Approx(env).epsilon(1e-9));
      CHECK(r2.weight(r2.op.fund_index(jf, lf)) == doctest::Approx(env).epsilon(1e-9));
    }

  // the trio is pairwise non-commuting
  CHECK(block_frobenius_norm(block_commutator(r1.op, r2.op)) > 0.1);
  CHECK(block_frobenius_norm(block_commutator(r1.op, r3.op)) > 0.1);
  CHECK(block_frobenius_norm(block_commutator(r2.op, r3.op)) > 0.1);

  // rebuilding from the extracted weight reproduces the gate matrix
  const ConventionTable t = build_convention_table(g48, 2, Axis::Theta);
  BlockOperator rebuilt = make_block_operator(g48, 2, Axis::Theta);
  for (int f = 0; f < rebuilt.fund_count(); ++f)
    rebuilt.blocks[f] =
        from_convention_block(t, r3.weight(f) * gellmann(2, r3.standard_alpha), f);
  double dev = 0.0;
  for (int f = 0; f < rebuilt.fund_count(); ++f)
    dev = std::max(dev, (rebuilt.blocks[f] - r3.op.blocks[f]).cwiseAbs().maxCoeff());
  CHECK(dev < 1e-8);
}

TEST_CASE("half-shift conjugation variant degenerates blockwise onto Gamma_3") {
  // Under this Zak convention Z(-1/2) G3 Z(1/2) lands on the same imaginary
  // swap pattern with weight 2 sin(theta + pi k); recorded, not used.
  const GateGammaReport sm = half_shift_gamma2(g48);
  CHECK(sm.standard_alpha == 2);
  const GateGammaReport r3 = gamma_via_gates(g48, 2, 3);
  CHECK(block_frobenius_norm(block_commutator(sm.op, r3.op)) < 1e-10);
  for (int jf = 0; jf < sm.op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < sm.op.fund_k_count(); ++lf)
      CHECK(sm.weight(sm.op.fund_index(jf, lf)) ==
            doctest::Approx(2.0 * std::sin(g48.theta_bar(jf) + kPi * g48.k_bar(lf)))
                .epsilon(1e-9));
}

TEST_CASE("lambda operators on the k axis") {
  const BlockOperator l1 = build_gamma(g48, 2, pauli_index_map(1), named_weight("cos2K", g48),
                                       Axis::K);
  CHECK(hermiticity_residual(l1) < 1e-12);
  for (const auto& b : l1.blocks) CHECK(std::abs(b.trace()) < 1e-12);
  // blocks pair l and l + 4 on the default grid
  CHECK(l1.member_index(0, 1, 1) == g48.mod_index(0, 1 + 4));

  const GateGammaReport gate = lambda1_via_gates(g48);
  CHECK(gate.off_block_residual < 1e-10);
  CHECK(gate.standard_alpha == 3);
  for (int jf = 0; jf < gate.op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < gate.op.fund_k_count(); ++lf)
      CHECK(gate.weight(gate.op.fund_index(jf, lf)) ==
            doctest::Approx(2.0 * std::cos(2.0 * kPi * g48.k_bar(lf))).epsilon(1e-9));
}

TEST_CASE("gamma_phi linear combinations") {
  const WeightSpec w = make_weight(named_weight("cos2", g48), g48, 2, Axis::Theta);
  const ConventionTable t = build_convention_table(g48, 2, Axis::Theta);

  const BlockOperator g3 = build_gamma_phi({0, 0, 1}, w, t);
  const BlockOperator direct = build_gamma(w, pauli_index_map(3), t);
  double dev = 0.0;
  for (int f = 0; f < g3.fund_count(); ++f)
    dev = std::max(dev, (g3.blocks[f] - direct.blocks[f]).norm());
  CHECK(dev < 1e-13);

  const BlockOperator gx = build_gamma_phi({1, 0, 0}, w, t);
  const BlockOperator gy = build_gamma_phi({0, 1, 0}, w, t);
  CHECK(block_frobenius_norm(block_commutator(gx, gy)) > 0.1);

  // spectrum contained in [-1, 1] for |zeta| <= 1
  for (const auto& row : block_spectrum(build_gamma_phi(
           Eigen::Vector3d(1, 1, 1).normalized(), w, t)))
    for (int i = 0; i < row.eigenvalues.size(); ++i)
      CHECK(std::abs(row.eigenvalues(i)) <= 1.0 + 1e-12);

  CHECK_THROWS_AS(build_gamma_phi({1, 1, 0}, w, t), std::invalid_argument);
}

TEST_CASE("blockwise Pauli algebra of the common-weight trio") {
  const WeightSpec w = make_weight(named_weight("cos2", g48), g48, 2, Axis::Theta);
  const ConventionTable t = build_convention_table(g48, 2, Axis::Theta);
  const BlockOperator trio[3] = {build_gamma(w, pauli_index_map(1), t),
                                 build_gamma(w, pauli_index_map(2), t),
                                 build_gamma(w, pauli_index_map(3), t)};
  const MatrixXcd fund = fundamental_samples(w.samples, g48, 2, Axis::Theta);
  // [zeta s_a, zeta s_b] = 2 i zeta^2 eps_abc s_c at every fundamental point
  const int eps[3][3] = {{0, 3, -2}, {-3, 0, 1}, {2, -1, 0}};
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      const BlockOperator comm = block_commutator(trio[a], trio[b]);
      const int c = std::abs(eps[a][b]) - 1;
      const double sign = eps[a][b] > 0 ? 1.0 : -1.0;
      for (int jf = 0; jf < comm.fund_theta_count(); ++jf)
        for (int lf = 0; lf < comm.fund_k_count(); ++lf) {
          const int f = comm.fund_index(jf, lf);
          const Complex z2 = fund(jf, lf) * fund(jf, lf);
          const MatrixXcd expected = Complex(0, 2.0) * sign * z2 * trio[c].blocks[f] /
                                     (std::abs(fund(jf, lf)) > 1e-14 ? fund(jf, lf) : 1.0);
          if (std::abs(fund(jf, lf)) < 1e-14) continue;
          worst = std::max(worst, (comm.blocks[f] - expected).cwiseAbs().maxCoeff());
        }
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("su3 family: rank, hermiticity, closure") {
  const Su3Family fam = build_su3_family(g48);
  CHECK(fam.min_gram_rank == 8);
  CHECK(fam.closure_residual < 1e-8);
  for (const auto& op : fam.ops) {
    CHECK(hermiticity_residual(op) < 1e-12);
    for (const auto& b : op.blocks) CHECK(std::abs(b.trace()) < 1e-12);
  }
}

TEST_CASE("C(Theta) family: measured structure of the quadratic-gate construction") {
  std::vector<BlockOperator> cs;
  for (int i = 0; i < 6; ++i) cs.push_back(su3_c_theta(g48, i * g48.delta_theta()));
  for (const auto& c : cs) {
    CHECK(hermiticity_residual(c) < 1e-12);
    for (const auto& b : c.blocks) CHECK(std::abs(b.trace()) < 1e-12);
    // off-diagonal in every block
    for (const auto& b : c.blocks)
      for (int i = 0; i < 3; ++i) CHECK(std::abs(b(i, i)) < 1e-12);
  }

  // Measured facts about this family: C(Theta) = cos(Theta) A + sin(Theta) B
  // with A, B built from a normal cyclic matrix, so the whole family spans
  // two block directions, commutes pairwise, and C(Theta + pi) = -C(Theta).
  // An eight-member pool built from these alone cannot reach Gram rank 8;
  // build_su3_family uses the pair-swap construction instead.
  std::vector<const BlockOperator*> ptrs;
  for (const auto& c : cs) ptrs.push_back(&c);
  CHECK(family_min_gram_rank(ptrs) == 2);
  for (size_t i = 0; i < cs.size(); ++i)
    for (size_t j = i + 1; j < cs.size(); ++j)
      CHECK(block_frobenius_norm(block_commutator(cs[i], cs[j])) < 1e-10);
  const BlockOperator cpi = su3_c_theta(g48, kPi);
  double dev = 0.0;
  for (int f = 0; f < cpi.fund_count(); ++f)
    dev = std::max(dev, (cpi.blocks[f] + cs[0].blocks[f]).cwiseAbs().maxCoeff());
  CHECK(dev < 1e-10);

  // the C operators do not commute with the diagonal family members
  const Su3Family fam = build_su3_family(g48);
  CHECK(block_frobenius_norm(block_commutator(cs[0], fam.ops[2])) > 0.1);
}

TEST_CASE("operator products across the two axes") {
  const BlockOperator gamma_diag = build_delta(g48, named_weight("cos2", g48), 2, Axis::Theta);
  const BlockOperator lambda_diag = build_delta(g48, named_weight("cos2K", g48), 2, Axis::K);
  const ProductReport diag = operator_product(gamma_diag, lambda_diag);
  CHECK(diag.hermiticity_residual < 1e-12);
  CHECK(diag.commutator_norm < 1e-12);

  const BlockOperator gamma_shift =
      build_shift(g48, 2, named_weight("const1", g48), Axis::Theta);
  const BlockOperator lambda_shift = build_shift(g48, 2, named_weight("const1", g48), Axis::K);
  const ProductReport shifts = operator_product(gamma_shift, lambda_shift);
  // measured, not assumed: pure shifts act on independent torus coordinates
  CHECK(shifts.commutator_norm < 1e-12);

  BlockOperator eye = make_block_operator(g48, 2, Axis::K);
  for (auto& b : eye.blocks) b = MatrixXcd::Identity(2, 2);
  const ProductReport with_identity = operator_product(gamma_diag, eye);
  CHECK((with_identity.matrix - block_to_dense(gamma_diag)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("expectation values") {
  const WeightSpec w = make_weight(named_weight("cos2", g48), g48, 2, Axis::Theta);
  const ConventionTable t = build_convention_table(g48, 2, Axis::Theta);
  const BlockOperator g1 = build_gamma(w, pauli_index_map(1), t);

  // block qubit aligned with the +1 eigenvector at a zeta = 1 point
  const ModularState up = prepare_block_qubit(g48, 0, 0, 2, {Complex(1, 0), Complex(0, 0)});
  CHECK(expectation(g1, up).real() == doctest::Approx(1.0).epsilon(1e-10));

  for (int trial = 0; trial < 10; ++trial) {
    const ModularState s = random_state(g48, 500 + trial);
    CHECK(std::abs(expectation(g1, s).imag()) < 1e-12);
  }

  const BlockOperator zero = make_block_operator(g48, 2, Axis::Theta);
  CHECK(std::abs(expectation(zero, up)) == 0.0);
}

TEST_CASE("gamma spectrum containment") {
  const WeightSpec w = make_weight(named_weight("cos2", g48), g48, 2, Axis::Theta);
  const ConventionTable t = build_convention_table(g48, 2, Axis::Theta);
  for (int alpha_f = 1; alpha_f <= 3; ++alpha_f) {
    const BlockOperator op = build_gamma(w, pauli_index_map(alpha_f), t);
    for (const auto& row : block_spectrum(op))
      for (int i = 0; i < row.eigenvalues.size(); ++i)
        CHECK(std::abs(row.eigenvalues(i)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("alternate grid smoke: constructions carry over to 24 x 4") {
  const ModularGrid g = make_grid(24, 4);
  const WeightSpec w = make_weight(named_weight("cos2", g), g, 2, Axis::Theta);
  const ConventionTable t = build_convention_table(g, 2, Axis::Theta);
  const BlockOperator g1 = build_gamma(w, pauli_index_map(1), t);
  CHECK(hermiticity_residual(g1) < 1e-12);

  const GateGammaReport r3 = gamma_via_gates(g, 2, 3);
  CHECK(r3.off_block_residual < 1e-10);
  CHECK(r3.structure_residual < 1e-8);
  for (int jf = 0; jf < r3.op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < r3.op.fund_k_count(); ++lf)
      CHECK(r3.weight(r3.op.fund_index(jf, lf)) ==
            doctest::Approx(2.0 * std::cos(g.theta_bar(jf) + kPi * g.k_bar(lf))).epsilon(1e-9));

  const Su3Family fam = build_su3_family(g);
  CHECK(fam.min_gram_rank == 8);

  const ModularState m = random_state(g, 99);
  CHECK((zak_forward(zak_inverse(m)).amp - m.amp).cwiseAbs().maxCoeff() < 1e-12);
}

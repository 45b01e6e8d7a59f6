#include "mvlab/gamma.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace mvlab {

namespace {

Complex table_at(const WeightTable& F, const ModularGrid& g, int j, int l) {
  return F(j % g.m_theta, l % g.n_k);
}

// Member coordinates of block (jf, lf), member m.
std::pair<int, int> member_jl(const BlockOperator& pattern, int jf, int lf, int m) {
  if (pattern.axis == Axis::Theta)
    return {jf + m * (pattern.grid.m_theta / pattern.d), lf};
  return {jf, lf + m * (pattern.grid.n_k / pattern.d)};
}

}  // namespace

MatrixXcd period_local_shift_matrix(const ModularGrid& g, int d, Axis axis) {
  check_divisibility(g, d, axis);
  const int N = g.total_dim();
  MatrixXcd S = MatrixXcd::Zero(N, N);
  if (axis == Axis::Theta) {
    const int step = g.m_theta / d;
    for (int j = 0; j < g.m_theta; ++j)
      for (int n = 0; n < g.n_k; ++n)
        S(g.pos_index((j + step) % g.m_theta, n), g.pos_index(j, n)) = 1.0;
  } else {
    // Ket shift k_bar -> k_bar + 1/d at fixed momentum integer part is the
    // position-diagonal phase exp(-i*2*pi*n/d) over the period index n.
    for (int j = 0; j < g.m_theta; ++j)
      for (int n = 0; n < g.n_k; ++n)
        S(g.pos_index(j, n), g.pos_index(j, n)) = std::polar(1.0, -2.0 * kPi * n / d);
  }
  const MatrixXcd Z = zak_matrix(g);
  return Z * S * Z.adjoint() / double(g.n_k);
}

ConventionTable build_convention_table(const ModularGrid& g, int d, Axis axis) {
  check_divisibility(g, d, axis);
  ConventionTable t;
  t.grid = g;
  t.d = d;
  t.axis = axis;
  // Member m of the block at (theta_bar, k_bar) carries chi_m relative to the
  // plain modular basis.  With these phases the quadratic-gate recipes have
  // real weights; the period-local shift acquires the recorded wrap flux.
  const BlockOperator pattern = make_block_operator(g, d, axis);
  t.chi = MatrixXcd::Zero(pattern.fund_count(), d);
  t.wrap_phase = VectorXcd::Zero(pattern.fund_count());
  const BlockOperator shift =
      dense_to_blocks(period_local_shift_matrix(g, d, axis), g, d, axis, 1e-9);
  for (int jf = 0; jf < pattern.fund_theta_count(); ++jf)
    for (int lf = 0; lf < pattern.fund_k_count(); ++lf) {
      const int f = pattern.fund_index(jf, lf);
      for (int m = 0; m < d; ++m) {
        const double ph = axis == Axis::Theta ? -kPi * m * g.k_bar(lf) / d
                                              : -m * g.theta_bar(jf) / (2.0 * d);
        t.chi(f, m) = std::polar(1.0, ph);
      }
      const MatrixXcd B = shift.blocks[f];
      t.wrap_phase(f) = std::conj(t.chi(f, 0)) * B(0, d - 1) * t.chi(f, d - 1);
    }
  return t;
}

MatrixXcd to_convention_block(const ConventionTable& t, const MatrixXcd& plain_block, int fund) {
  MatrixXcd B(t.d, t.d);
  for (int a = 0; a < t.d; ++a)
    for (int b = 0; b < t.d; ++b)
      B(a, b) = std::conj(t.chi(fund, a)) * plain_block(a, b) * t.chi(fund, b);
  return B;
}

MatrixXcd from_convention_block(const ConventionTable& t, const MatrixXcd& conv_block, int fund) {
  MatrixXcd B(t.d, t.d);
  for (int a = 0; a < t.d; ++a)
    for (int b = 0; b < t.d; ++b)
      B(a, b) = t.chi(fund, a) * conv_block(a, b) * std::conj(t.chi(fund, b));
  return B;
}

BlockOperator build_gamma(const WeightSpec& w, int alpha, const ConventionTable& t) {
  if (w.grid != t.grid || w.d != t.d || w.axis != t.axis)
    throw std::invalid_argument("build_gamma: weight/table mismatch");
  const MatrixXcd gen = gellmann(w.d, alpha);
  const MatrixXcd fund = fundamental_samples(w.samples, w.grid, w.d, w.axis);
  BlockOperator op = make_block_operator(w.grid, w.d, w.axis);
  for (int jf = 0; jf < op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < op.fund_k_count(); ++lf) {
      const int f = op.fund_index(jf, lf);
      op.blocks[f] = from_convention_block(t, fund(jf, lf) * gen, f);
    }
  return op;
}

BlockOperator build_gamma(const ModularGrid& g, int d, int alpha, const WeightTable& F, Axis axis) {
  const WeightSpec w = make_weight(F, g, d, axis);
  const ConventionTable t = build_convention_table(g, d, axis);
  return build_gamma(w, alpha, t);
}

BlockOperator build_lambda(const ModularGrid& g, int d, int alpha, const WeightTable& F) {
  return build_gamma(g, d, alpha, F, Axis::K);
}

BlockOperator build_delta(const ModularGrid& g, const WeightTable& F, int d, Axis axis) {
  if (F.rows() != g.m_theta || F.cols() != g.n_k)
    throw std::invalid_argument("build_delta: table must be m_theta x n_k");
  BlockOperator op = make_block_operator(g, d, axis);
  for (int jf = 0; jf < op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < op.fund_k_count(); ++lf) {
      MatrixXcd& B = op.blocks[op.fund_index(jf, lf)];
      for (int m = 0; m < d; ++m) {
        auto [j, l] = member_jl(op, jf, lf, m);
        B(m, m) = table_at(F, g, j, l);
      }
    }
  return op;
}

BlockOperator build_shift(const ModularGrid& g, int d, const WeightTable& f, Axis axis) {
  if (f.rows() != g.m_theta || f.cols() != g.n_k)
    throw std::invalid_argument("build_shift: table must be m_theta x n_k");
  BlockOperator op = make_block_operator(g, d, axis);
  for (int jf = 0; jf < op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < op.fund_k_count(); ++lf) {
      MatrixXcd& B = op.blocks[op.fund_index(jf, lf)];
      for (int m = 0; m < d; ++m) {
        auto [j, l] = member_jl(op, jf, lf, m);
        B((m + 1) % d, m) = table_at(f, g, j, l);
      }
    }
  return op;
}

BlockOperator gamma_from_SD(const BlockOperator& S, const BlockOperator& D) {
  require_compatible(S, D);
  BlockOperator sd = block_product(S, D);
  return block_add(sd, block_adjoint(sd));
}

DeltaDecomposition decompose_delta(const BlockOperator& delta, const ConventionTable& t) {
  if (delta.grid != t.grid || delta.d != t.d || delta.axis != t.axis)
    throw std::invalid_argument("decompose_delta: table mismatch");
  const int d = delta.d;
  std::vector<MatrixXcd> diag_gens;
  for (int a = 1; a <= gellmann_count(d); ++a)
    if (gellmann_slot(d, a).diagonal) diag_gens.push_back(gellmann(d, a));
  DeltaDecomposition out;
  out.diag_coeffs = MatrixXcd::Zero(delta.fund_count(), d - 1);
  for (int f = 0; f < delta.fund_count(); ++f) {
    const MatrixXcd& B = delta.blocks[f];
    MatrixXcd recon = MatrixXcd::Zero(d, d);
    const Complex id_coeff = B.trace() / double(d);
    out.identity_residual = std::max(out.identity_residual, std::abs(id_coeff));
    for (size_t i = 0; i < diag_gens.size(); ++i) {
      const Complex c = (diag_gens[i] * B).trace() / 2.0;
      out.diag_coeffs(f, i) = c;
      recon += c * diag_gens[i];
    }
    out.reconstruction_residual =
        std::max(out.reconstruction_residual,
                 (B - recon - id_coeff * MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  return out;
}

namespace {

GateGammaReport extract_report(const MatrixXcd& dense, const ModularGrid& g, int d, Axis axis) {
  GateGammaReport rep;
  rep.off_block_residual = off_block_residual(dense, g, d, axis);
  rep.op = dense_to_blocks(dense, g, d, axis, 1e-9);
  const ConventionTable t = build_convention_table(g, d, axis);
  rep.weight = VectorXd::Zero(rep.op.fund_count());

  // Identify the single best-fitting generator pattern over all blocks.
  double best = 1e300;
  for (int a = 1; a <= gellmann_count(d); ++a) {
    const MatrixXcd gen = gellmann(d, a);
    double res = 0.0;
    for (int f = 0; f < rep.op.fund_count(); ++f) {
      const MatrixXcd B = to_convention_block(t, rep.op.blocks[f], f);
      const Complex c = (gen * B).trace() / 2.0;
      res = std::max(res, (B - c.real() * gen).cwiseAbs().maxCoeff());
    }
    if (res < best) {
      best = res;
      rep.standard_alpha = a;
    }
  }
  const MatrixXcd gen = gellmann(d, rep.standard_alpha);
  for (int f = 0; f < rep.op.fund_count(); ++f) {
    const MatrixXcd B = to_convention_block(t, rep.op.blocks[f], f);
    const Complex c = (gen * B).trace() / 2.0;
    rep.weight(f) = c.real();
    rep.weight_imag_max = std::max(rep.weight_imag_max, std::abs(c.imag()));
    rep.structure_residual =
        std::max(rep.structure_residual, (B - c.real() * gen).cwiseAbs().maxCoeff());
  }
  return rep;
}

}  // namespace

VectorXd half_region_mask(const ModularGrid& g) {
  VectorXd mask = VectorXd::Zero(g.m_theta);
  for (int j = g.m_theta / 2; j < g.m_theta; ++j) mask(j) = -0.5 * kPi;
  return mask;
}

GateGammaReport half_shift_gamma2(const ModularGrid& g) {
  const MatrixXcd sum =
      gate_to_matrix(GateSpec::z(1.0), g) + gate_to_matrix(GateSpec::z(-1.0), g);
  const MatrixXcd U = gate_to_matrix(GateSpec::u(0.5 * kPi), g);
  const MatrixXcd Zh = gate_to_matrix(GateSpec::z(0.5), g);
  const MatrixXcd Zmh = gate_to_matrix(GateSpec::z(-0.5), g);
  return extract_report(Zmh * U * sum * U.adjoint() * Zh, g, 2, Axis::Theta);
}

GateGammaReport gamma_via_gates(const ModularGrid& g, int d, int alpha_f) {
  if (d != 2) throw std::invalid_argument("gamma_via_gates: gate recipes cover d = 2 here");
  check_divisibility(g, d, Axis::Theta);
  const MatrixXcd Z1 = gate_to_matrix(GateSpec::z(1.0), g);
  const MatrixXcd Zm1 = gate_to_matrix(GateSpec::z(-1.0), g);
  const MatrixXcd sum = Z1 + Zm1;
  MatrixXcd dense;
  switch (alpha_f) {
    case 1:
      dense = sum;
      break;
    case 3: {
      const MatrixXcd U = gate_to_matrix(GateSpec::u(0.5 * kPi), g);
      dense = U * sum * U.adjoint();
      break;
    }
    case 2: {
      // Phase elements on the two half-circle regions rotate the imaginary
      // swap into the real one at the same weight.  The half-shift
      // sandwich Z(-1/2) ... Z(1/2) lands parallel to Gamma_3 under this Zak
      // convention; see half_shift_gamma2.
      const MatrixXcd U = gate_to_matrix(GateSpec::u(0.5 * kPi), g);
      const MatrixXcd V = gate_to_matrix(GateSpec::slm(half_region_mask(g)), g);
      dense = V * (U * sum * U.adjoint()) * V.adjoint();
      break;
    }
    default:
      throw std::invalid_argument("gamma_via_gates: alpha must be 1, 2 or 3");
  }
  return extract_report(dense, g, d, Axis::Theta);
}

GateGammaReport lambda1_via_gates(const ModularGrid& g) {
  check_divisibility(g, 2, Axis::K);
  const MatrixXcd Xp = gate_to_matrix(GateSpec::x(2.0 * kPi), g);
  const MatrixXcd Xm = gate_to_matrix(GateSpec::x(-2.0 * kPi), g);
  return extract_report(Xp + Xm, g, 2, Axis::K);
}

BlockOperator build_gamma_phi(const Eigen::Vector3d& direction, const WeightSpec& w,
                              const ConventionTable& t) {
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("build_gamma_phi: direction must be a unit vector");
  if (w.d != 2) throw std::invalid_argument("build_gamma_phi: d = 2 only");
  BlockOperator out = make_block_operator(w.grid, 2, w.axis);
  for (int i = 0; i < 3; ++i) {
    const BlockOperator g_i = build_gamma(w, pauli_index_map(i + 1), t);
    out = block_add(out, block_scale(g_i, direction(i)));
  }
  return out;
}

std::array<BlockOperator, 3> canonical_pauli_trio(const ModularGrid& g,
                                                  const std::string& weight_name) {
  const WeightSpec w = make_weight(named_weight(weight_name, g), g, 2, Axis::Theta);
  const ConventionTable t = build_convention_table(g, 2, Axis::Theta);
  return {build_gamma(w, pauli_index_map(1), t), build_gamma(w, pauli_index_map(2), t),
          build_gamma(w, pauli_index_map(3), t)};
}

int family_gram_rank_at(const std::vector<const BlockOperator*>& ops, int fund) {
  const int n = int(ops.size());
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = ((ops[i]->blocks[fund].adjoint() * ops[j]->blocks[fund]).trace()).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (top <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 1e-8 * top) ++rank;
  return rank;
}

int family_min_gram_rank(const std::vector<const BlockOperator*>& ops, int* deficient_point) {
  int min_rank = int(ops.size());
  if (deficient_point) *deficient_point = -1;
  for (int f = 0; f < ops[0]->fund_count(); ++f) {
    const int r = family_gram_rank_at(ops, f);
    if (r < min_rank) {
      min_rank = r;
      if (deficient_point) *deficient_point = f;
    }
  }
  return min_rank;
}

namespace {

Eigen::VectorXd vec_hermitian(const MatrixXcd& H) {
  const int d = int(H.rows());
  Eigen::VectorXd v(d * d);
  int idx = 0;
  for (int i = 0; i < d; ++i) v(idx++) = H(i, i).real();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      v(idx++) = H(i, j).real();
      v(idx++) = H(i, j).imag();
    }
  return v;
}

}  // namespace

double family_closure_residual(const std::vector<const BlockOperator*>& ops) {
  const int n = int(ops.size());
  double worst = 0.0;
  for (int f = 0; f < ops[0]->fund_count(); ++f) {
    const int d = ops[0]->d;
    Eigen::MatrixXd V(d * d, n);
    for (int i = 0; i < n; ++i) V.col(i) = vec_hermitian(ops[i]->blocks[f]);
    const Eigen::MatrixXd pinv = (V.transpose() * V).ldlt().solve(V.transpose()).eval();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const MatrixXcd comm = ops[i]->blocks[f] * ops[j]->blocks[f] -
                               ops[j]->blocks[f] * ops[i]->blocks[f];
        const MatrixXcd h = Complex(0.0, 1.0) * comm;  // hermitian for hermitian inputs
        const Eigen::VectorXd c = vec_hermitian(h);
        const double norm = c.norm();
        if (norm < 1e-12) continue;
        const Eigen::VectorXd proj = V * (pinv * c);
        worst = std::max(worst, (c - proj).norm() / norm);
      }
  }
  return worst;
}

Su3Family build_su3_family(const ModularGrid& g) {
  check_divisibility(g, 3, Axis::Theta);
  const WeightTable F = named_weight("exp3", g);
  const WeightSpec w = make_weight(F, g, 3, Axis::Theta);
  const ConventionTable t = build_convention_table(g, 3, Axis::Theta);

  const BlockOperator delta = build_delta(g, F, 3, Axis::Theta);
  const BlockOperator delta_dag = block_adjoint(delta);
  const BlockOperator g3 = block_scale(block_add(delta, delta_dag), 0.5);
  const BlockOperator g8 = block_scale(block_add(delta, block_scale(delta_dag, -1.0)),
                                       Complex(0.0, -0.5));

  Su3Family fam{{g3, g3, g3, g3, g3, g3, g3, g3}, 0, -1, 0.0};
  fam.ops[2] = g3;  // lambda_3 slot
  fam.ops[7] = g8;  // lambda_8 slot

  // Off-diagonal pair operators: per fundamental point, an orthogonal frame
  // rotated by the exp3 phase u inside each (j,k) pair plane.
  const MatrixXcd fund = fundamental_samples(F, g, 3, Axis::Theta);
  struct Slot {
    int sym_alpha, anti_alpha;
  };
  const Slot slots[3] = {{1, 2}, {4, 5}, {6, 7}};
  BlockOperator proto = make_block_operator(g, 3, Axis::Theta);
  for (const Slot& s : slots) {
    BlockOperator op_sym = proto, op_anti = proto;
    const MatrixXcd ls = gellmann(3, s.sym_alpha);
    const MatrixXcd la = gellmann(3, s.anti_alpha);
    for (int f = 0; f < proto.fund_count(); ++f) {
      const int jf = f / proto.fund_k_count();
      const int lf = f % proto.fund_k_count();
      const double u = std::arg(fund(jf, lf));
      op_sym.blocks[f] = from_convention_block(t, std::cos(u) * ls + std::sin(u) * la, f);
      op_anti.blocks[f] = from_convention_block(t, -std::sin(u) * ls + std::cos(u) * la, f);
    }
    fam.ops[s.sym_alpha - 1] = op_sym;
    fam.ops[s.anti_alpha - 1] = op_anti;
  }

  std::vector<const BlockOperator*> ptrs;
  for (const auto& op : fam.ops) ptrs.push_back(&op);
  fam.min_gram_rank = family_min_gram_rank(ptrs, &fam.deficient_point);
  fam.closure_residual = family_closure_residual(ptrs);
  if (fam.min_gram_rank < 8)
    throw std::runtime_error("su3 family rank deficiency at fundamental point " +
                             std::to_string(fam.deficient_point));
  return fam;
}

BlockOperator su3_c_theta(const ModularGrid& g, double theta) {
  check_divisibility(g, 3, Axis::Theta);
  const MatrixXcd X = gate_to_matrix(GateSpec::x(theta), g);
  const MatrixXcd U = gate_to_matrix(GateSpec::u(kPi / 3.0), g);
  const MatrixXcd sum = gate_to_matrix(GateSpec::z(1.0), g) + gate_to_matrix(GateSpec::z(-1.0), g);
  const MatrixXcd dense = X.adjoint() * U * sum * U.adjoint() * X;
  return dense_to_blocks(dense, g, 3, Axis::Theta, 1e-9);
}

}  // namespace mvlab

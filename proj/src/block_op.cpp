#include "mvlab/block_op.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace mvlab {

void check_divisibility(const ModularGrid& g, int d, Axis axis) {
  if (d < 1) throw std::invalid_argument("block dimension must be >= 1");
  if (axis == Axis::Theta && g.m_theta % d != 0)
    throw std::invalid_argument("d does not divide m_theta");
  if (axis == Axis::K && g.n_k % d != 0) throw std::invalid_argument("d does not divide n_k");
}

BlockOperator make_block_operator(const ModularGrid& g, int d, Axis axis) {
  check_divisibility(g, d, axis);
  BlockOperator op;
  op.grid = g;
  op.d = d;
  op.axis = axis;
  op.blocks.assign(op.fund_count(), MatrixXcd::Zero(d, d));
  return op;
}

void require_compatible(const BlockOperator& a, const BlockOperator& b) {
  if (a.grid != b.grid || a.d != b.d || a.axis != b.axis)
    throw std::invalid_argument("incompatible block operators");
}

MatrixXcd block_to_dense(const BlockOperator& op) {
  const int N = op.grid.total_dim();
  MatrixXcd M = MatrixXcd::Zero(N, N);
  for (int jf = 0; jf < op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < op.fund_k_count(); ++lf) {
      const MatrixXcd& B = op.blocks[op.fund_index(jf, lf)];
      for (int m = 0; m < op.d; ++m)
        for (int mp = 0; mp < op.d; ++mp)
          M(op.member_index(jf, lf, m), op.member_index(jf, lf, mp)) = B(m, mp);
    }
  return M;
}

double off_block_residual(const MatrixXcd& m, const ModularGrid& g, int d, Axis axis) {
  BlockOperator pattern = make_block_operator(g, d, axis);
  MatrixXcd mask = m;
  for (int jf = 0; jf < pattern.fund_theta_count(); ++jf)
    for (int lf = 0; lf < pattern.fund_k_count(); ++lf)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          mask(pattern.member_index(jf, lf, a), pattern.member_index(jf, lf, b)) = 0.0;
  return mask.cwiseAbs().maxCoeff();
}

BlockOperator dense_to_blocks(const MatrixXcd& m, const ModularGrid& g, int d, Axis axis,
                              double tol) {
  if (m.rows() != g.total_dim() || m.cols() != g.total_dim())
    throw std::invalid_argument("dense_to_blocks: size mismatch");
  const double res = off_block_residual(m, g, d, axis);
  if (res > tol)
    throw std::runtime_error("dense matrix is not block-diagonal in the requested pairing (residual " +
                             std::to_string(res) + ")");
  BlockOperator op = make_block_operator(g, d, axis);
  for (int jf = 0; jf < op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < op.fund_k_count(); ++lf) {
      MatrixXcd& B = op.blocks[op.fund_index(jf, lf)];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          B(a, b) = m(op.member_index(jf, lf, a), op.member_index(jf, lf, b));
    }
  return op;
}

VectorXcd apply_block_operator_amp(const BlockOperator& op, const VectorXcd& amp) {
  if (amp.size() != op.grid.total_dim()) throw std::invalid_argument("apply: size mismatch");
  VectorXcd out = VectorXcd::Zero(amp.size());
  VectorXcd v(op.d);
  for (int jf = 0; jf < op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < op.fund_k_count(); ++lf) {
      const MatrixXcd& B = op.blocks[op.fund_index(jf, lf)];
      for (int m = 0; m < op.d; ++m) v(m) = amp(op.member_index(jf, lf, m));
      VectorXcd w = B * v;
      for (int m = 0; m < op.d; ++m) out(op.member_index(jf, lf, m)) = w(m);
    }
  return out;
}

ModularState apply_block_operator(const BlockOperator& op, const ModularState& s) {
  require_same_grid(op.grid, s.grid);
  return ModularState(s.grid, apply_block_operator_amp(op, s.amp));
}

double hermiticity_residual(const BlockOperator& op) {
  double r = 0.0;
  for (const auto& B : op.blocks) r = std::max(r, (B - B.adjoint()).cwiseAbs().maxCoeff());
  return r;
}

double operator_norm(const BlockOperator& op) {
  double r = 0.0;
  for (const auto& B : op.blocks) {
    Eigen::JacobiSVD<MatrixXcd> svd(B);
    if (svd.singularValues().size() > 0) r = std::max(r, svd.singularValues()(0));
  }
  return r;
}

Complex expectation(const BlockOperator& op, const ModularState& s) {
  require_same_grid(op.grid, s.grid);
  return s.amp.dot(apply_block_operator_amp(op, s.amp)) * s.grid.delta_theta() * s.grid.delta_k();
}

Complex expectation(const MatrixXcd& op_modular, const ModularState& s) {
  if (op_modular.rows() != s.grid.total_dim()) throw std::invalid_argument("expectation: size mismatch");
  return s.amp.dot(op_modular * s.amp) * s.grid.delta_theta() * s.grid.delta_k();
}

namespace {
BlockOperator map_blocks(const BlockOperator& a, const BlockOperator& b,
                         MatrixXcd (*f)(const MatrixXcd&, const MatrixXcd&)) {
  require_compatible(a, b);
  BlockOperator out = a;
  for (size_t i = 0; i < out.blocks.size(); ++i) out.blocks[i] = f(a.blocks[i], b.blocks[i]);
  return out;
}
}  // namespace

BlockOperator block_product(const BlockOperator& a, const BlockOperator& b) {
  return map_blocks(a, b, +[](const MatrixXcd& x, const MatrixXcd& y) -> MatrixXcd { return x * y; });
}

BlockOperator block_add(const BlockOperator& a, const BlockOperator& b) {
  return map_blocks(a, b, +[](const MatrixXcd& x, const MatrixXcd& y) -> MatrixXcd { return x + y; });
}

BlockOperator block_scale(const BlockOperator& a, Complex c) {
  BlockOperator out = a;
  for (auto& B : out.blocks) B *= c;
  return out;
}

BlockOperator block_adjoint(const BlockOperator& a) {
  BlockOperator out = a;
  for (size_t i = 0; i < out.blocks.size(); ++i) out.blocks[i] = a.blocks[i].adjoint();
  return out;
}

BlockOperator block_commutator(const BlockOperator& a, const BlockOperator& b) {
  return map_blocks(a, b,
                    +[](const MatrixXcd& x, const MatrixXcd& y) -> MatrixXcd { return x * y - y * x; });
}

double block_frobenius_norm(const BlockOperator& a) {
  double s = 0.0;
  for (const auto& B : a.blocks) s += B.squaredNorm();
  return std::sqrt(s);
}

ProductReport operator_product(const BlockOperator& gamma, const BlockOperator& lambda) {
  require_same_grid(gamma.grid, lambda.grid);
  const MatrixXcd G = block_to_dense(gamma);
  const MatrixXcd L = block_to_dense(lambda);
  ProductReport rep;
  rep.matrix = G * L;
  rep.hermiticity_residual = (rep.matrix - rep.matrix.adjoint()).cwiseAbs().maxCoeff();
  rep.commutator_norm = (G * L - L * G).norm();
  return rep;
}

std::vector<SpectrumRow> block_spectrum(const BlockOperator& op) {
  std::vector<SpectrumRow> rows;
  rows.reserve(op.fund_count());
  for (int jf = 0; jf < op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < op.fund_k_count(); ++lf) {
      const MatrixXcd& B = op.blocks[op.fund_index(jf, lf)];
      SpectrumRow row;
      row.theta_bar = op.grid.theta_bar(jf);
      row.k_bar = op.grid.k_bar(lf);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (B + B.adjoint()));
      row.eigenvalues = es.eigenvalues();
      rows.push_back(std::move(row));
    }
  return rows;
}

}  // namespace mvlab

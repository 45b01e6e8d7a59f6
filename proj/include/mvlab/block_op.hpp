#pragma once

// Block-diagonal operator algebra: one d x d matrix per fundamental-domain
// point of the modular torus.  Blocks pair theta_bar offsets 2*pi*m/d (axis
// Theta) or k_bar offsets m/d (axis K).

#include <vector>

#include "mvlab/grid.hpp"

namespace mvlab {

enum class Axis { Theta, K };

struct BlockOperator {
  ModularGrid grid;
  int d = 2;
  Axis axis = Axis::Theta;
  // Row-major over fundamental points: axis Theta -> (j_f, l) with
  // j_f in [0, m_theta/d); axis K -> (j, l_f) with l_f in [0, n_k/d).
  std::vector<MatrixXcd> blocks;

  int fund_theta_count() const { return axis == Axis::Theta ? grid.m_theta / d : grid.m_theta; }
  int fund_k_count() const { return axis == Axis::Theta ? grid.n_k : grid.n_k / d; }
  int fund_count() const { return fund_theta_count() * fund_k_count(); }
  int fund_index(int jf, int lf) const { return jf * fund_k_count() + lf; }
  // Modular index of member m of the block at fundamental point (jf, lf).
  int member_index(int jf, int lf, int m) const {
    if (axis == Axis::Theta) return grid.mod_index(jf + m * (grid.m_theta / d), lf);
    return grid.mod_index(jf, lf + m * (grid.n_k / d));
  }
  double fund_theta(int jf) const { return grid.theta_bar(jf); }
  double fund_k(int lf) const { return grid.k_bar(lf); }
};

BlockOperator make_block_operator(const ModularGrid& g, int d, Axis axis);
void check_divisibility(const ModularGrid& g, int d, Axis axis);
void require_compatible(const BlockOperator& a, const BlockOperator& b);

MatrixXcd block_to_dense(const BlockOperator& op);
// Inverse of block_to_dense; throws if off-block entries exceed tol.
BlockOperator dense_to_blocks(const MatrixXcd& m, const ModularGrid& g, int d, Axis axis,
                              double tol = 1e-10);
double off_block_residual(const MatrixXcd& m, const ModularGrid& g, int d, Axis axis);

VectorXcd apply_block_operator_amp(const BlockOperator& op, const VectorXcd& amp);
ModularState apply_block_operator(const BlockOperator& op, const ModularState& s);

double hermiticity_residual(const BlockOperator& op);
double operator_norm(const BlockOperator& op);  // largest |eigenvalue| over blocks (hermitian blocks assumed not required; uses singular values)

// <psi|Op|psi> with the grid measure.
Complex expectation(const BlockOperator& op, const ModularState& s);
Complex expectation(const MatrixXcd& op_modular, const ModularState& s);

// Blockwise products and linear combinations.
BlockOperator block_product(const BlockOperator& a, const BlockOperator& b);
BlockOperator block_add(const BlockOperator& a, const BlockOperator& b);
BlockOperator block_scale(const BlockOperator& a, Complex c);
BlockOperator block_adjoint(const BlockOperator& a);
BlockOperator block_commutator(const BlockOperator& a, const BlockOperator& b);
double block_frobenius_norm(const BlockOperator& a);

struct ProductReport {
  MatrixXcd matrix;
  double hermiticity_residual = 0.0;
  double commutator_norm = 0.0;
};

// Dense product of a Theta-axis and a K-axis operator in the modular basis;
// hermiticity is measured and reported, not assumed.
ProductReport operator_product(const BlockOperator& gamma, const BlockOperator& lambda);

// Per-block eigenvalues; for hermitian blocks these are the operator spectrum.
struct SpectrumRow {
  double theta_bar;
  double k_bar;
  VectorXd eigenvalues;
};
std::vector<SpectrumRow> block_spectrum(const BlockOperator& op);

}  // namespace mvlab

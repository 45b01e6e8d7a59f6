#pragma once

// Bipartite states over two modular grids, CHSH correlators with Gamma_phi
// observables, bipartite weighted operators (entangling gates) and Schmidt
// analysis.

#include "mvlab/bloch.hpp"

namespace mvlab {

// Amplitude matrix C[a, b] over the two parties' modular indices.
// Norm: ||C||_F^2 * (dtheta dk)_A * (dtheta dk)_B = 1.
struct BipartiteState {
  ModularGrid grid_a, grid_b;
  MatrixXcd c;

  BipartiteState() = default;
  BipartiteState(const ModularGrid& ga, const ModularGrid& gb, MatrixXcd amp)
      : grid_a(ga), grid_b(gb), c(std::move(amp)) {
    if (c.rows() != ga.total_dim() || c.cols() != gb.total_dim())
      throw std::invalid_argument("BipartiteState: size mismatch");
  }
};

double bipartite_norm(const BipartiteState& s);
void require_normalized(const BipartiteState& s, double tol = kNormTol);

BipartiteState tensor_product_state(const ModularState& a, const ModularState& b);
BipartiteState apply_local(const BipartiteState& s, const MatrixXcd& ua, const MatrixXcd& ub);

// Correlated block-Bell state: equal member superposition at pair-blocks in a
// window of the given cell count around (j0, l0), both parties correlated.
BipartiteState block_bell_state(const ModularGrid& g, int j0, int l0, int window_cells);

struct SchmidtDecomposition {
  VectorXd coefficients;   // nonincreasing, squares sum to 1
  MatrixXcd basis_a, basis_b;
  double reconstruction_residual = 0.0;
};
SchmidtDecomposition schmidt_decompose(const BipartiteState& s);
double schmidt_entropy(const VectorXd& coefficients);  // nats

double correlator(const BlockOperator& op_a, const BlockOperator& op_b, const BipartiteState& s);

// M(i,j) = <Gamma_i x Gamma_j> over the formalism-indexed trios.
Eigen::Matrix3d correlation_matrix(const BlochFrame& fa, const BlochFrame& fb,
                                   const BipartiteState& s);

double chsh_value(const Eigen::Matrix3d& m, const Eigen::Vector3d& u1, const Eigen::Vector3d& u1p,
                  const Eigen::Vector3d& u2, const Eigen::Vector3d& u2p);
double chsh_value(const Eigen::Vector3d& u1, const Eigen::Vector3d& u1p, const Eigen::Vector3d& u2,
                  const Eigen::Vector3d& u2p, const BipartiteState& s, const BlochFrame& fa,
                  const BlochFrame& fb);

struct ChshResult {
  double value = 0.0;
  Eigen::Vector3d u1, u1p, u2, u2p;
};
// Deterministic 16x16 coarse scan per direction followed by coordinate
// descent with step halving down to 1e-4.
ChshResult chsh_optimize(const Eigen::Matrix3d& m);
ChshResult chsh_optimize(const BipartiteState& s, const BlochFrame& fa, const BlochFrame& fb);
// Independent oracle: 2 sqrt(s1^2 + s2^2) over the top two singular values.
double chsh_horodecki_bound(const Eigen::Matrix3d& m);

// Bipartite operator: separable pair or blockwise zeta * gamma_a1 x gamma_a2.
struct BipartiteOperator {
  bool separable = true;
  BlockOperator op_a, op_b;  // separable form

  // weighted form
  ModularGrid grid_a, grid_b;
  int d1 = 2, d2 = 2;
  int alpha1 = 1, alpha2 = 1;  // standard generator indices
  MatrixXcd zeta;              // fundamental_a x fundamental_b samples
  double validation_residual = 0.0;
  // plain-basis generator blocks per fundamental point of each party
  std::vector<MatrixXcd> gen_a, gen_b;
};

BipartiteOperator separable_operator(const BlockOperator& a, const BlockOperator& b);

// zeta_full indexed by the full modular indices of both parties; each party's
// slice must satisfy the weight conditions independently.
BipartiteOperator build_bipartite_gamma(const ModularGrid& ga, const ModularGrid& gb, int d1,
                                        int d2, int alpha1, int alpha2, const MatrixXcd& zeta_full);

BipartiteState apply_bipartite(const BipartiteOperator& g, const BipartiteState& s);
double bipartite_expectation(const BipartiteOperator& g, const BipartiteState& s);

// exp(-i tau G)|psi> on the populated pair-blocks.
BipartiteState entangling_evolution(const BipartiteOperator& g, double tau,
                                    const BipartiteState& s);

int operator_schmidt_rank(const BipartiteOperator& g, double rel_tol = 1e-8);

}  // namespace mvlab

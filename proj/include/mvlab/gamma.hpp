#pragma once

// Continuous-spectrum operator constructions: diagonal Delta, cyclic shifts
// S, the Gamma (theta axis) and Lambda (k axis) families, SU(3) family, and
// the convention table relating gate-built operators to direct block
// constructions under the fixed Zak convention.

#include <array>
#include <optional>

#include "mvlab/block_op.hpp"
#include "mvlab/gates.hpp"
#include "mvlab/gellmann.hpp"
#include "mvlab/weights.hpp"

namespace mvlab {

// Per-block basis phases chi_m(point) that turn the period-local d-step shift
// into the plain cyclic permutation.  All "gate equals block construction up
// to phases" statements are made in this basis.  Derived numerically once per
// (grid, d, axis) from the dense shift matrix.
struct ConventionTable {
  ModularGrid grid;
  int d = 2;
  Axis axis = Axis::Theta;
  std::string version = "ct-v1";
  MatrixXcd chi;          // fund_count x d member phases
  VectorXcd wrap_phase;   // residual cyclic flux per block
};

// Dense modular matrix of the period-local shift by one block step
// (theta_bar += 2*pi/d at fixed period index, or k_bar += 1/d at fixed
// momentum integer part).
MatrixXcd period_local_shift_matrix(const ModularGrid& g, int d, Axis axis);

ConventionTable build_convention_table(const ModularGrid& g, int d, Axis axis);

MatrixXcd to_convention_block(const ConventionTable& t, const MatrixXcd& plain_block, int fund);
MatrixXcd from_convention_block(const ConventionTable& t, const MatrixXcd& conv_block, int fund);

// Gamma_alpha^(d) = integral of zeta * gamma_alpha over the fundamental
// domain, realized blockwise: conv-basis block = zeta(point) *
// gellmann(d, alpha).  alpha uses the standard generator index.
BlockOperator build_gamma(const WeightSpec& w, int alpha, const ConventionTable& t);
BlockOperator build_gamma(const ModularGrid& g, int d, int alpha, const WeightTable& F, Axis axis);

// Same construction along the k_bar axis (blocks step by 1/d in k_bar).
BlockOperator build_lambda(const ModularGrid& g, int d, int alpha, const WeightTable& F);

// General diagonal operator Delta with entries F(theta_bar_j, k_bar_l),
// viewed in (d, axis) blocks.  F need not pass validation.
BlockOperator build_delta(const ModularGrid& g, const WeightTable& F, int d, Axis axis);

// Cyclic block shift: member m -> m+1 (mod d) weighted by f at the source
// point; unitary iff |f| = 1 everywhere.
BlockOperator build_shift(const ModularGrid& g, int d, const WeightTable& f, Axis axis);

// Gamma = S D + (S D)^dagger.
BlockOperator gamma_from_SD(const BlockOperator& S, const BlockOperator& D);

struct DeltaDecomposition {
  // Per fundamental point, coefficients over the d-1 diagonal generators.
  MatrixXcd diag_coeffs;       // fund_count x (d-1)
  double identity_residual = 0.0;
  double reconstruction_residual = 0.0;
};
DeltaDecomposition decompose_delta(const BlockOperator& delta, const ConventionTable& t);

// Gate-built Gamma operators (d = 2, formalism index alpha in {1,2,3}):
// 1: Z(1)+Z(-1); 3: U[pi/2](Z(1)+Z(-1))U[-pi/2]; 2: the phase-element
// conjugation of 3 (see half_region_mask).  The realized operator is verified
// block-diagonal and its per-block weight extracted in the convention basis.
struct GateGammaReport {
  BlockOperator op;            // plain-basis blocks of the realized operator
  VectorXd weight;             // extracted weight per fundamental point
  int standard_alpha = 0;      // generator pattern matched
  double off_block_residual = 0.0;
  double structure_residual = 0.0;  // max || conv_block - weight * generator ||
  double weight_imag_max = 0.0;
};
GateGammaReport gamma_via_gates(const ModularGrid& g, int d, int alpha_f);

// K-axis gate analog of Gamma_1: X(2pi) + X(-2pi).
GateGammaReport lambda1_via_gates(const ModularGrid& g);

// Phase mask -pi/2 on [pi, 2pi), zero on [0, pi); conjugation by it rotates
// the imaginary-swap pattern into the real swap at the same weight.
VectorXd half_region_mask(const ModularGrid& g);

// The half-shift conjugation Z(-1/2) U[pi/2](Z(1)+Z(-1))U[-pi/2] Z(1/2);
// under this Zak convention it realizes 2 sin(theta_bar + pi k_bar) times the
// imaginary swap, i.e. blockwise parallel to Gamma_3.  Kept for measurement.
GateGammaReport half_shift_gamma2(const ModularGrid& g);

// Linear combination sum_a direction[a] * Gamma_a over the formalism-indexed
// d=2 trio with a common weight.
BlockOperator build_gamma_phi(const Eigen::Vector3d& direction, const WeightSpec& w,
                              const ConventionTable& t);

// Canonical d=2 trio (formalism indexing: 1 diagonal, 2 real swap, 3
// imaginary swap) with the named common weight, default "cos2".
std::array<BlockOperator, 3> canonical_pauli_trio(const ModularGrid& g,
                                                  const std::string& weight_name = "cos2");

// SU(3) family: Gamma_3, Gamma_8 from the exp3 diagonal plus six off-diagonal
// pair operators built per the systematic recipe (pair swaps composed with
// diagonal phase profiles), indexed by the standard Gell-Mann slots.
struct Su3Family {
  std::array<BlockOperator, 8> ops;  // ops[a-1] corresponds to lambda_a slots
  int min_gram_rank = 0;
  int deficient_point = -1;          // fundamental index of a rank-deficient point
  double closure_residual = 0.0;     // commutator projection residual
};
Su3Family build_su3_family(const ModularGrid& g);

// Quadratic-gate SU(3) construction C(Theta) =
// X(-Theta) U[pi/3] (Z(1)+Z(-1)) U[-pi/3] X(Theta), returned as a verified
// BlockOperator (d=3, axis Theta).
BlockOperator su3_c_theta(const ModularGrid& g, double theta);

// Rank of the span of the given operators' blocks at one fundamental point
// (trace inner product), and the minimum over all points.
int family_gram_rank_at(const std::vector<const BlockOperator*>& ops, int fund);
int family_min_gram_rank(const std::vector<const BlockOperator*>& ops, int* deficient_point = nullptr);
double family_closure_residual(const std::vector<const BlockOperator*>& ops);

}  // namespace mvlab

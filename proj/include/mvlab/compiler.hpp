#pragma once

// Gate-program compilation of the operator targets, numeric verification
// against the direct block constructions, and the two Mach-Zehnder
// architectures (expectation readout and state output).

#include <optional>

#include "mvlab/gamma.hpp"

namespace mvlab {

// Gate-native operator targets.  d = 2 uses the formalism index (1 diagonal,
// 2 real swap, 3 imaginary swap); d = 3 uses the standard generator index.
// Sigma targets are the reflection-built pair swaps.
struct TargetSpec {
  int d = 2;
  int alpha = 1;
  Axis axis = Axis::Theta;
  bool sigma = false;
  int sigma_j = 0, sigma_k = 1;
  std::string name() const;
};

struct InterferometerNode {
  std::vector<GateSpec> arm_s;  // displacement arm
  std::vector<GateSpec> arm_d;  // diagonal arm
  double eta = 0.0;
  // Generalized splitting ratio: with a second arm pair present the node
  // realizes cos(beta) * N1 + sin(beta) * N2(epsilon), where
  // N2 = e^{i epsilon} S2 D2 + e^{-i epsilon} (S2 D2)^dagger.  The 50/50
  // antisymmetric splitter is beta = 0 with no second pair.
  std::vector<GateSpec> arm_s2, arm_d2;
  bool has_second_pair = false;
  double beta = 0.0;
  double epsilon = 0.0;
};

// Time-ordered program: pre gates, optional interferometer node, post gates.
// A pure gate list realizes a unitary; a node realizes the observable
// S D + e^{i eta} (S D)^dagger assembled from its arm subprograms.
struct GateProgram {
  std::vector<GateSpec> pre;
  std::optional<InterferometerNode> node;
  std::vector<GateSpec> post;
  std::string target;
  std::string convention_version = "ct-v1";
};

GateProgram compile_gamma(const TargetSpec& t, const ModularGrid& g);
MatrixXcd program_to_matrix(const GateProgram& p, const ModularGrid& g);

// Closed-form direct construction the program is checked against (recorded
// gate-native weight profiles in the convention basis).
MatrixXcd direct_construction(const TargetSpec& t, const ModularGrid& g);

struct VerifyReport {
  double max_deviation = 0.0;
  double tolerance = 1e-8;
  bool pass = false;
  std::string target;
};
VerifyReport verify(const GateProgram& p, const TargetSpec& t, const ModularGrid& g);

std::vector<TargetSpec> supported_targets(const ModularGrid& g);

// Reflection sequence realizing the period-local swap of regions j and k of
// the d-fold split (first element acts first).
std::vector<GateSpec> sigma_swap_reflections(int d, int j, int k);

// Measurement interferometer: P_j = (1 + (-1)^{j+1} Re[e^{-i eta} <S D>])/2,
// so P1 - P2 reads Re<SD> at eta = 0 and Im<SD> at eta = pi/2.  Throws if
// |<e^{-i eta} S D>| exceeds 1 (norm precondition on the support of s).
struct MzProbabilities {
  double p1 = 0.0, p2 = 0.0;
};
MzProbabilities mz_probabilities(const MatrixXcd& s_op, const MatrixXcd& d_op, double eta,
                                 const ModularState& s);
MzProbabilities mz_probabilities(const BlockOperator& s_op, const BlockOperator& d_op, double eta,
                                 const ModularState& s);

// State-output interferometer: port outputs (S D +/- e^{i eta}(S D)^dag)|psi>/2
// with their success probabilities.
struct MzOutput {
  ModularState state;
  double success_probability = 0.0;
};
MzOutput mz_output_state(const MatrixXcd& s_op, const MatrixXcd& d_op, double eta, int port,
                         const ModularState& s);

}  // namespace mvlab

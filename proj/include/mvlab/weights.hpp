#pragma once

// Weight functions F(theta_bar, k_bar) on the torus and the roots-of-unity
// validation that qualifies them for the block decomposition: along the block
// axis, F(x + n*period/d) = c_n * F(x) with c_n = exp(2*pi*i*n*branch/d), and
// F continuous at the edges of each fundamental domain.

#include <string>
#include <vector>

#include "mvlab/block_op.hpp"

namespace mvlab {

// Full-circle samples, F(j, l) = F(theta_bar_j, k_bar_l).
using WeightTable = MatrixXcd;

struct WeightValidation {
  bool pass = false;
  int d = 0;
  Axis axis = Axis::Theta;
  int root_branch = -1;                 // branch that passed, -1 if none
  double roots_residual = 0.0;          // best-branch max |F_n - c_n F_0|
  double edge_residual = 0.0;           // best-branch edge-continuity residual
  double edge_tolerance = 0.0;
  std::vector<double> branch_residuals; // per-branch roots residuals
};

// Validated weight bound to a grid, block dimension and axis.
struct WeightSpec {
  ModularGrid grid;
  int d = 2;
  Axis axis = Axis::Theta;
  WeightTable samples;
  WeightValidation validation;
};

WeightValidation validate_weight(const WeightTable& F, const ModularGrid& g, int d, Axis axis,
                                 double roots_tol = 1e-10, double edge_tol = 1e-8);

// Throws if the weight fails validation.
WeightSpec make_weight(const WeightTable& F, const ModularGrid& g, int d, Axis axis);

// Restriction of F to the fundamental domain of (d, axis).
MatrixXcd fundamental_samples(const WeightTable& F, const ModularGrid& g, int d, Axis axis);

// Named weights used throughout: "cos2" = cos(theta_bar - k_bar*pi) (d=2,
// axis Theta), "exp3" = exp(i(theta_bar - k_bar*2pi/3)) (d=3, axis Theta),
// "cos2K" = cos(2*pi*k_bar) (d=2, axis K), "exp3K" (d=3, axis K), "const1".
WeightTable named_weight(const std::string& name, const ModularGrid& g);
std::vector<std::string> weight_registry_names();

WeightTable weight_from_function(const ModularGrid& g, Complex (*f)(double theta_bar, double k_bar));

}  // namespace mvlab

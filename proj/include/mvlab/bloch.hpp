#pragma once

// Bloch-ball coordinates of states under the d=2 trio {Gamma_1, Gamma_2,
// Gamma_3} (formalism indexing) and the degeneracy / ball-fill constructions.

#include <array>

#include "mvlab/gamma.hpp"

namespace mvlab {

struct BlochPoint {
  double x = 0.0, y = 0.0, z = 0.0;
  double radius() const { return std::sqrt(x * x + y * y + z * z); }
};

// Trio plus the data needed for constructive state building.
struct BlochFrame {
  ModularGrid grid;
  WeightSpec weight;
  ConventionTable table;
  std::array<BlockOperator, 3> trio;
  std::vector<int> unit_weight_points;  // fundamental indices with zeta = max|zeta| = 1
};

BlochFrame make_bloch_frame(const ModularGrid& g, const std::string& weight_name = "cos2");

BlochPoint bloch_coords(const ModularState& s, const BlochFrame& f);

// Normalized eigenvector state of the direction block at a fundamental point
// (sign +1 picks the largest eigenvalue, -1 the smallest).
ModularState block_eigenstate(const BlochFrame& f, int fund, const Eigen::Vector3d& direction,
                              int sign = +1);

// Pure state with bloch_coords = radius * direction, built from a balanced
// pair of unit-weight blocks.  radius in [0, 1].
ModularState state_with_radius(const BlochFrame& f, double radius, const Eigen::Vector3d& direction,
                               int which_pair = 0);

// Two states with the same BlochPoint (within 1e-6) and |<a,b>| < 0.99.
std::pair<ModularState, ModularState> find_degenerate_pair(const BlochFrame& f,
                                                           const BlochPoint& target);

struct BallFillRow {
  double requested = 0.0;
  double achieved = 0.0;
  BlochPoint point;
};
std::vector<BallFillRow> sample_ball_fill(const BlochFrame& f, const std::vector<double>& radii);

}  // namespace mvlab

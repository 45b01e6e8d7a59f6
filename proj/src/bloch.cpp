#include "mvlab/bloch.hpp"

#include <Eigen/Eigenvalues>

namespace mvlab {

BlochFrame make_bloch_frame(const ModularGrid& g, const std::string& weight_name) {
  BlochFrame f;
  f.grid = g;
  f.weight = make_weight(named_weight(weight_name, g), g, 2, Axis::Theta);
  f.table = build_convention_table(g, 2, Axis::Theta);
  f.trio = {build_gamma(f.weight, pauli_index_map(1), f.table),
            build_gamma(f.weight, pauli_index_map(2), f.table),
            build_gamma(f.weight, pauli_index_map(3), f.table)};
  const MatrixXcd fund = fundamental_samples(f.weight.samples, g, 2, Axis::Theta);
  const BlockOperator& pattern = f.trio[0];
  double zmax = 0.0;
  for (int jf = 0; jf < pattern.fund_theta_count(); ++jf)
    for (int lf = 0; lf < pattern.fund_k_count(); ++lf)
      zmax = std::max(zmax, std::abs(fund(jf, lf)));
  for (int jf = 0; jf < pattern.fund_theta_count(); ++jf)
    for (int lf = 0; lf < pattern.fund_k_count(); ++lf)
      if (std::abs(std::abs(fund(jf, lf)) - zmax) < 1e-12 && fund(jf, lf).real() > 0)
        f.unit_weight_points.push_back(pattern.fund_index(jf, lf));
  return f;
}

BlochPoint bloch_coords(const ModularState& s, const BlochFrame& f) {
  require_same_grid(s.grid, f.grid);
  require_normalized(s);
  BlochPoint p;
  p.x = expectation(f.trio[0], s).real();
  p.y = expectation(f.trio[1], s).real();
  p.z = expectation(f.trio[2], s).real();
  return p;
}

namespace {

// Spinor (plain basis) of the extreme eigenvector of the direction block.
Eigen::Vector2cd block_direction_spinor(const BlochFrame& f, int fund,
                                        const Eigen::Vector3d& direction, int sign) {
  MatrixXcd B = MatrixXcd::Zero(2, 2);
  for (int i = 0; i < 3; ++i) B += direction(i) * f.trio[i].blocks[fund];
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(B);
  const int idx = sign > 0 ? 1 : 0;  // eigenvalues ascending
  return es.eigenvectors().col(idx);
}

std::pair<int, int> fund_to_jl(const BlockOperator& pattern, int fund) {
  return {fund / pattern.fund_k_count(), fund % pattern.fund_k_count()};
}

}  // namespace

ModularState block_eigenstate(const BlochFrame& f, int fund, const Eigen::Vector3d& direction,
                              int sign) {
  const Eigen::Vector2cd v = block_direction_spinor(f, fund, direction, sign);
  auto [jf, lf] = fund_to_jl(f.trio[0], fund);
  return prepare_block_qubit(f.grid, jf, lf, 2, {v(0), v(1)});
}

ModularState state_with_radius(const BlochFrame& f, double radius,
                               const Eigen::Vector3d& direction, int which_pair) {
  if (radius < 0.0 || radius > 1.0) throw std::invalid_argument("radius must lie in [0, 1]");
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("direction must be a unit vector");
  if (f.unit_weight_points.size() < 2)
    throw std::runtime_error("weight has fewer than two unit-level points on this grid");
  const int p1 = f.unit_weight_points[(2 * which_pair) % f.unit_weight_points.size()];
  const int p2 = f.unit_weight_points[(2 * which_pair + 1) % f.unit_weight_points.size()];

  const Eigen::Vector2cd va = block_direction_spinor(f, p1, direction, +1);
  const Eigen::Vector2cd vb = block_direction_spinor(f, p2, direction, -1);
  const double a = std::sqrt(0.5 * (1.0 + radius));
  const double b = std::sqrt(0.5 * (1.0 - radius));

  auto [j1, l1] = fund_to_jl(f.trio[0], p1);
  auto [j2, l2] = fund_to_jl(f.trio[0], p2);
  const double scale = 1.0 / std::sqrt(f.grid.delta_theta() * f.grid.delta_k());
  VectorXcd amp = VectorXcd::Zero(f.grid.total_dim());
  const int half = f.grid.m_theta / 2;
  amp(f.grid.mod_index(j1, l1)) += a * va(0) * scale;
  amp(f.grid.mod_index(j1 + half, l1)) += a * va(1) * scale;
  amp(f.grid.mod_index(j2, l2)) += b * vb(0) * scale;
  amp(f.grid.mod_index(j2 + half, l2)) += b * vb(1) * scale;
  return ModularState(f.grid, std::move(amp));
}

std::pair<ModularState, ModularState> find_degenerate_pair(const BlochFrame& f,
                                                           const BlochPoint& target) {
  const double r = target.radius();
  if (r >= 1.0) throw std::invalid_argument("degenerate pair: target radius must be < 1");
  if (f.unit_weight_points.size() < 4)
    throw std::runtime_error("need at least four unit-weight points for disjoint constructions");
  Eigen::Vector3d dir(target.x, target.y, target.z);
  if (r < 1e-14)
    dir = Eigen::Vector3d(0, 0, 1);
  else
    dir /= r;
  return {state_with_radius(f, r, dir, 0), state_with_radius(f, r, dir, 1)};
}

std::vector<BallFillRow> sample_ball_fill(const BlochFrame& f, const std::vector<double>& radii) {
  std::vector<BallFillRow> rows;
  const Eigen::Vector3d dir(0, 0, 1);
  for (const double r : radii) {
    const ModularState s = state_with_radius(f, r, dir);
    BallFillRow row;
    row.requested = r;
    row.point = bloch_coords(s, f);
    row.achieved = row.point.radius();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mvlab

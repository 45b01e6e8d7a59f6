#pragma once

// Discretized modular Hilbert space: the (theta_bar, k_bar) torus, states on
// it, and the Zak transform connecting the position and modular
// representations.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mvlab {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kNormTol = 1e-10;

// Discretization of the modular torus [0,2pi) x [0,1) plus its position-space
// dual of n_k retained periods.  theta_bar_j = j*delta_theta, k_bar_l =
// l*delta_k (left-edge sampling).
struct ModularGrid {
  int m_theta = 0;  // samples of theta_bar in [0, 2pi)
  int n_k = 0;      // samples of k_bar in [0, 1); also number of position periods

  ModularGrid() = default;
  ModularGrid(int m, int n) : m_theta(m), n_k(n) {
    if (m < 2 || n < 1) throw std::invalid_argument("ModularGrid: need m_theta >= 2, n_k >= 1");
  }

  double delta_theta() const { return 2.0 * kPi / m_theta; }
  double delta_k() const { return 1.0 / n_k; }
  int total_dim() const { return m_theta * n_k; }
  double theta_bar(int j) const { return j * delta_theta(); }
  double k_bar(int l) const { return l * delta_k(); }
  // Modular amplitude layout: row-major in (j, l).
  int mod_index(int j, int l) const { return j * n_k + l; }
  // Position layout: s = j + m_theta * n, theta_s = theta_bar_j + 2*pi*n.
  int pos_index(int j, int n) const { return j + m_theta * n; }
  double theta_pos(int s) const { return s * delta_theta(); }

  bool operator==(const ModularGrid& o) const { return m_theta == o.m_theta && n_k == o.n_k; }
  bool operator!=(const ModularGrid& o) const { return !(*this == o); }
};

inline ModularGrid make_grid(int m_theta, int n_k) { return ModularGrid(m_theta, n_k); }

// Amplitudes g~(theta_bar_j, k_bar_l), indexed mod_index(j,l).
// Norm convention: sum |g~|^2 * delta_theta * delta_k = 1.
struct ModularState {
  ModularGrid grid;
  VectorXcd amp;

  ModularState() = default;
  ModularState(const ModularGrid& g, VectorXcd a) : grid(g), amp(std::move(a)) {
    if (amp.size() != grid.total_dim()) throw std::invalid_argument("ModularState: size mismatch");
  }
  Complex& at(int j, int l) { return amp(grid.mod_index(j, l)); }
  Complex at(int j, int l) const { return amp(grid.mod_index(j, l)); }
};

// Amplitudes g(theta_s) over n_k periods.  Norm: sum |g|^2 * delta_theta = 1.
struct PositionState {
  ModularGrid grid;
  VectorXcd amp;

  PositionState() = default;
  PositionState(const ModularGrid& g, VectorXcd a) : grid(g), amp(std::move(a)) {
    if (amp.size() != grid.total_dim()) throw std::invalid_argument("PositionState: size mismatch");
  }
};

double modular_norm(const ModularState& s);
double position_norm(const PositionState& s);
void require_normalized(const ModularState& s, double tol = kNormTol);
void require_normalized(const PositionState& s, double tol = kNormTol);
void require_same_grid(const ModularGrid& a, const ModularGrid& b);

// Zak transform.  Forward:
//   g~[j,l] = exp(i*theta_bar_j*k_bar_l/2) * sum_n exp(i*2*pi*n*k_bar_l) g[j + m_theta*n]
// Unitary for the measure-weighted norms above; zak_inverse is its exact
// inverse on the grid.
ModularState zak_forward(const PositionState& s);
PositionState zak_inverse(const ModularState& m);

// Same maps on raw amplitude vectors (no normalization precondition).
VectorXcd zak_forward_amp(const ModularGrid& g, const VectorXcd& pos);
VectorXcd zak_inverse_amp(const ModularGrid& g, const VectorXcd& mod);

// Dense matrix Z with mod = Z * pos.  Z^dagger Z = n_k * I; the unitary map
// on amplitude vectors is Z / sqrt(n_k).
MatrixXcd zak_matrix(const ModularGrid& g);

// Measure-weighted inner product sum conj(a) b * delta_theta * delta_k.
Complex inner_product(const ModularState& a, const ModularState& b);
Complex inner_product(const PositionState& a, const PositionState& b);

// State preparation.  All outputs normalized; parameters outside the grid
// ranges are rejected.
ModularState prepare_block_qubit(const ModularGrid& g, int j0, int l0, int d,
                                 const std::vector<Complex>& spinor);
ModularState prepare_gaussian(const ModularGrid& g, double center, double width);
ModularState prepare_comb(const ModularGrid& g, int j0);
ModularState prepare_cat(const ModularGrid& g, double center1, double center2, double width,
                         double rel_phase);

// Deterministic pseudo-random normalized state (iid complex Gaussian
// amplitudes, then normalization).
ModularState random_state(const ModularGrid& g, unsigned long long seed);

}  // namespace mvlab

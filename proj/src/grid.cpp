#include "mvlab/grid.hpp"

#include <cmath>
#include <random>

namespace mvlab {

double modular_norm(const ModularState& s) {
  return std::sqrt(s.amp.squaredNorm() * s.grid.delta_theta() * s.grid.delta_k());
}

double position_norm(const PositionState& s) {
  return std::sqrt(s.amp.squaredNorm() * s.grid.delta_theta());
}

void require_normalized(const ModularState& s, double tol) {
  if (std::abs(modular_norm(s) - 1.0) > tol)
    throw std::invalid_argument("modular state not normalized (|1 - norm| = " +
                                std::to_string(std::abs(modular_norm(s) - 1.0)) + ")");
}

void require_normalized(const PositionState& s, double tol) {
  if (std::abs(position_norm(s) - 1.0) > tol)
    throw std::invalid_argument("position state not normalized");
}

void require_same_grid(const ModularGrid& a, const ModularGrid& b) {
  if (a != b) throw std::invalid_argument("grid mismatch");
}

VectorXcd zak_forward_amp(const ModularGrid& g, const VectorXcd& pos) {
  const int M = g.m_theta, N = g.n_k;
  VectorXcd mod(g.total_dim());
  for (int j = 0; j < M; ++j) {
    for (int l = 0; l < N; ++l) {
      Complex acc(0.0, 0.0);
      const double kb = g.k_bar(l);
      for (int n = 0; n < N; ++n)
        acc += std::polar(1.0, 2.0 * kPi * n * kb) * pos(g.pos_index(j, n));
      mod(g.mod_index(j, l)) = std::polar(1.0, 0.5 * g.theta_bar(j) * kb) * acc;
    }
  }
  return mod;
}

VectorXcd zak_inverse_amp(const ModularGrid& g, const VectorXcd& mod) {
  const int M = g.m_theta, N = g.n_k;
  VectorXcd pos(g.total_dim());
  for (int j = 0; j < M; ++j) {
    for (int n = 0; n < N; ++n) {
      Complex acc(0.0, 0.0);
      for (int l = 0; l < N; ++l) {
        const double kb = g.k_bar(l);
        acc += std::polar(1.0, -2.0 * kPi * n * kb - 0.5 * g.theta_bar(j) * kb) *
               mod(g.mod_index(j, l));
      }
      pos(g.pos_index(j, n)) = acc / double(N);
    }
  }
  return pos;
}

ModularState zak_forward(const PositionState& s) {
  require_normalized(s);
  return ModularState(s.grid, zak_forward_amp(s.grid, s.amp));
}

PositionState zak_inverse(const ModularState& m) {
  require_normalized(m);
  return PositionState(m.grid, zak_inverse_amp(m.grid, m.amp));
}

MatrixXcd zak_matrix(const ModularGrid& g) {
  MatrixXcd Z = MatrixXcd::Zero(g.total_dim(), g.total_dim());
  for (int j = 0; j < g.m_theta; ++j)
    for (int l = 0; l < g.n_k; ++l)
      for (int n = 0; n < g.n_k; ++n)
        Z(g.mod_index(j, l), g.pos_index(j, n)) =
            std::polar(1.0, 2.0 * kPi * n * g.k_bar(l) + 0.5 * g.theta_bar(j) * g.k_bar(l));
  return Z;
}

Complex inner_product(const ModularState& a, const ModularState& b) {
  require_same_grid(a.grid, b.grid);
  return a.amp.dot(b.amp) * a.grid.delta_theta() * a.grid.delta_k();
}

Complex inner_product(const PositionState& a, const PositionState& b) {
  require_same_grid(a.grid, b.grid);
  return a.amp.dot(b.amp) * a.grid.delta_theta();
}

ModularState prepare_block_qubit(const ModularGrid& g, int j0, int l0, int d,
                                 const std::vector<Complex>& spinor) {
  if (j0 < 0 || j0 >= g.m_theta || l0 < 0 || l0 >= g.n_k)
    throw std::invalid_argument("block_qubit: base point outside grid");
  if (d < 2 || g.m_theta % d != 0) throw std::invalid_argument("block_qubit: d must divide m_theta");
  if (int(spinor.size()) != d) throw std::invalid_argument("block_qubit: spinor size != d");
  double n2 = 0.0;
  for (auto c : spinor) n2 += std::norm(c);
  if (n2 <= 0.0) throw std::invalid_argument("block_qubit: zero spinor");
  const double scale = 1.0 / std::sqrt(n2 * g.delta_theta() * g.delta_k());
  VectorXcd amp = VectorXcd::Zero(g.total_dim());
  for (int m = 0; m < d; ++m) {
    const int j = (j0 + m * (g.m_theta / d)) % g.m_theta;
    amp(g.mod_index(j, l0)) = spinor[m] * scale;
  }
  return ModularState(g, std::move(amp));
}

ModularState prepare_gaussian(const ModularGrid& g, double center, double width) {
  if (width <= 0.0) throw std::invalid_argument("gaussian: width must be positive");
  if (center < 0.0 || center >= 2.0 * kPi * g.n_k)
    throw std::invalid_argument("gaussian: center outside position range");
  VectorXcd pos(g.total_dim());
  for (int s = 0; s < g.total_dim(); ++s) {
    const double d = g.theta_pos(s) - center;
    pos(s) = std::exp(-d * d / (4.0 * width * width));
  }
  pos /= std::sqrt(pos.squaredNorm() * g.delta_theta());
  return ModularState(g, zak_forward_amp(g, pos));
}

ModularState prepare_comb(const ModularGrid& g, int j0) {
  if (j0 < 0 || j0 >= g.m_theta) throw std::invalid_argument("comb: j0 outside grid");
  VectorXcd pos = VectorXcd::Zero(g.total_dim());
  const double a = 1.0 / std::sqrt(g.n_k * g.delta_theta());
  for (int n = 0; n < g.n_k; ++n) pos(g.pos_index(j0, n)) = a;
  return ModularState(g, zak_forward_amp(g, pos));
}

ModularState prepare_cat(const ModularGrid& g, double center1, double center2, double width,
                         double rel_phase) {
  if (width <= 0.0) throw std::invalid_argument("cat: width must be positive");
  const double range = 2.0 * kPi * g.n_k;
  if (center1 < 0.0 || center1 >= range || center2 < 0.0 || center2 >= range)
    throw std::invalid_argument("cat: center outside position range");
  VectorXcd pos(g.total_dim());
  const Complex ph = std::polar(1.0, rel_phase);
  for (int s = 0; s < g.total_dim(); ++s) {
    const double t = g.theta_pos(s);
    const double d1 = t - center1, d2 = t - center2;
    pos(s) = std::exp(-d1 * d1 / (4.0 * width * width)) +
             ph * std::exp(-d2 * d2 / (4.0 * width * width));
  }
  const double n2 = pos.squaredNorm() * g.delta_theta();
  if (n2 <= 0.0) throw std::invalid_argument("cat: destructive parameters give zero state");
  pos /= std::sqrt(n2);
  return ModularState(g, zak_forward_amp(g, pos));
}

ModularState random_state(const ModularGrid& g, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXcd amp(g.total_dim());
  for (int i = 0; i < g.total_dim(); ++i) {
    const double re = gauss(rng), im = gauss(rng);
    amp(i) = Complex(re, im);
  }
  amp /= std::sqrt(amp.squaredNorm() * g.delta_theta() * g.delta_k());
  return ModularState(g, std::move(amp));
}

}  // namespace mvlab

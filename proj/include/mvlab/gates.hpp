#pragma once

// Primitive gate set on the position grid: phase-shift gates X(Theta), Z(K),
// the quadratic gate U[phi], SLM phase masks and period-local reflections.
// Every gate is an exact unitary on the grid.

#include <memory>
#include <mutex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvlab/grid.hpp"

namespace mvlab {

enum class GateKind { X, Z, U, SlmPhase, Reflect, Dagger };

// Tagged-union gate description.  SlmPhase carries a real phase table over
// the theta_bar grid (length m_theta, applied identically in every period) or
// over the full position grid (length m_theta*n_k).
struct GateSpec {
  GateKind kind = GateKind::X;
  double param = 0.0;    // Theta for X, K for Z, phi for U, theta_p for Reflect
  double param2 = 0.0;   // delta_theta (half-width) for Reflect
  VectorXd table;        // SlmPhase samples
  std::shared_ptr<const GateSpec> inner;  // Dagger

  static GateSpec x(double theta) { return {GateKind::X, theta, 0.0, {}, nullptr}; }
  static GateSpec z(double k) { return {GateKind::Z, k, 0.0, {}, nullptr}; }
  static GateSpec u(double phi) { return {GateKind::U, phi, 0.0, {}, nullptr}; }
  static GateSpec slm(VectorXd phase) { return {GateKind::SlmPhase, 0.0, 0.0, std::move(phase), nullptr}; }
  static GateSpec reflect(double theta_p, double dtheta) {
    return {GateKind::Reflect, theta_p, dtheta, {}, nullptr};
  }
  static GateSpec dagger(GateSpec g) {
    GateSpec d;
    d.kind = GateKind::Dagger;
    d.inner = std::make_shared<const GateSpec>(std::move(g));
    return d;
  }
};

std::string gate_name(const GateSpec& g);

// Apply a gate to position-space amplitudes.
VectorXcd apply_gate_amp(const GateSpec& g, const ModularGrid& grid, const VectorXcd& pos);

PositionState apply_gate(const GateSpec& g, const PositionState& s);
// Modular-state application goes through the Zak transform.
ModularState apply_gate(const GateSpec& g, const ModularState& s);

PositionState apply_X(double theta, const PositionState& s);
ModularState apply_X(double theta, const ModularState& s);
PositionState apply_Z(double k, const PositionState& s);
ModularState apply_Z(double k, const ModularState& s);
PositionState apply_U(double phi, const PositionState& s);
ModularState apply_U(double phi, const ModularState& s);
PositionState apply_reflection(double theta_p, double dtheta, const PositionState& s);
ModularState apply_reflection(double theta_p, double dtheta, const ModularState& s);

// Dense gate matrix acting on position amplitudes.
MatrixXcd gate_matrix_position(const GateSpec& g, const ModularGrid& grid);
// Dense gate matrix in the modular basis, ordering mod_index(j,l).
MatrixXcd gate_to_matrix(const GateSpec& g, const ModularGrid& grid);
// Product of a gate sequence (first element acts first) in the modular basis.
MatrixXcd sequence_to_matrix(const std::vector<GateSpec>& seq, const ModularGrid& grid);

// U[phi/2] Z(K) U[-phi/2]: shifts theta_bar by K*phi within fixed k_bar, up
// to phases fixed by the dense-matrix oracle under our convention.
std::vector<GateSpec> conjugated_shift(double phi, double k);

// Memoized modular-basis gate matrices; safe for concurrent reads.
class GateCache {
 public:
  explicit GateCache(const ModularGrid& g) : grid_(g) {}
  const MatrixXcd& matrix(const GateSpec& g);

 private:
  ModularGrid grid_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const MatrixXcd>> store_;
  std::vector<std::shared_ptr<const MatrixXcd>> pinned_;
};

double unitarity_residual(const MatrixXcd& m);

}  // namespace mvlab

#include "mvlab/gates.hpp"

#include <cmath>
#include <cstdio>

namespace mvlab {

namespace {

// Symmetric momentum window [-m_theta/2, m_theta/2), spacing 1/n_k.
double momentum_value(const ModularGrid& g, int t) {
  const int N = g.total_dim();
  const double k = double(t) / g.n_k;
  return (2 * t >= N) ? k - g.m_theta : k;
}

// Unitary DFT, kernel exp(-2*pi*i*t*s/N)/sqrt(N).
MatrixXcd dft_matrix(const ModularGrid& g) {
  const int N = g.total_dim();
  MatrixXcd F(N, N);
  for (int t = 0; t < N; ++t)
    for (int s = 0; s < N; ++s) F(t, s) = std::polar(1.0 / std::sqrt(double(N)), -2.0 * kPi * t * s / N);
  return F;
}

VectorXcd to_momentum(const ModularGrid& g, const VectorXcd& pos) {
  const int N = g.total_dim();
  VectorXcd out(N);
  for (int t = 0; t < N; ++t) {
    Complex acc(0, 0);
    for (int s = 0; s < N; ++s) acc += std::polar(1.0, -2.0 * kPi * double(t) * s / N) * pos(s);
    out(t) = acc / std::sqrt(double(N));
  }
  return out;
}

VectorXcd from_momentum(const ModularGrid& g, const VectorXcd& mom) {
  const int N = g.total_dim();
  VectorXcd out(N);
  for (int s = 0; s < N; ++s) {
    Complex acc(0, 0);
    for (int t = 0; t < N; ++t) acc += std::polar(1.0, 2.0 * kPi * double(t) * s / N) * mom(t);
    out(s) = acc / std::sqrt(double(N));
  }
  return out;
}

struct ReflectRegion {
  int r2 = 0;     // 2*theta_p in cell units
  int start = 0;  // first cell of the region (mod m_theta)
  int width = 0;  // cells
};

int round_to_int(double x, const char* what) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9) throw std::invalid_argument(std::string(what) + " not aligned with grid cells");
  return int(r);
}

// Reflections act per period on the theta_bar torus; theta_p may sit on a
// sample or a cell center (2*theta_p multiple of delta_theta), the region
// edges must sit on cell boundaries.
ReflectRegion parse_region(const ModularGrid& g, double theta_p, double dtheta) {
  if (dtheta <= 0.0 || dtheta > kPi + 1e-12)
    throw std::invalid_argument("reflection: need 0 < delta_theta <= pi");
  const double dt = g.delta_theta();
  ReflectRegion r;
  r.r2 = round_to_int(2.0 * theta_p / dt, "reflection axis");
  r.start = round_to_int((theta_p - dtheta) / dt, "reflection region edge");
  r.width = round_to_int(2.0 * dtheta / dt, "reflection region width");
  if (r.width > g.m_theta) throw std::invalid_argument("reflection region exceeds the torus");
  r.start = ((r.start % g.m_theta) + g.m_theta) % g.m_theta;
  r.r2 = ((r.r2 % (2 * g.m_theta)) + 2 * g.m_theta) % (2 * g.m_theta);
  return r;
}

VectorXcd apply_reflection_amp(const ModularGrid& g, double theta_p, double dtheta,
                               const VectorXcd& pos) {
  const ReflectRegion r = parse_region(g, theta_p, dtheta);
  const int M = g.m_theta;
  VectorXcd out = pos;
  for (int n = 0; n < g.n_k; ++n) {
    for (int i = 0; i < r.width; ++i) {
      const int j = (r.start + i) % M;
      const int jr = ((r.r2 - 1 - j) % M + M) % M;
      out(g.pos_index(j, n)) = pos(g.pos_index(jr, n));
    }
  }
  return out;
}

uint64_t fnv1a(const void* data, size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < n; ++i) h = (h ^ p[i]) * 1099511628211ull;
  return h;
}

std::string cache_key(const GateSpec& g) {
  char buf[128];
  if (g.kind == GateKind::Dagger) return "D(" + cache_key(*g.inner) + ")";
  std::snprintf(buf, sizeof buf, "%s:%.17g:%.17g:%llu:%zu", gate_name(g).c_str(), g.param, g.param2,
                (unsigned long long)fnv1a(g.table.data(), sizeof(double) * g.table.size()),
                (size_t)g.table.size());
  return buf;
}

}  // namespace

std::string gate_name(const GateSpec& g) {
  switch (g.kind) {
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::U: return "U";
    case GateKind::SlmPhase: return "slm";
    case GateKind::Reflect: return "reflect";
    case GateKind::Dagger: return "dagger";
  }
  return "?";
}

VectorXcd apply_gate_amp(const GateSpec& g, const ModularGrid& grid, const VectorXcd& pos) {
  const int N = grid.total_dim();
  if (pos.size() != N) throw std::invalid_argument("apply_gate: size mismatch");
  switch (g.kind) {
    case GateKind::X: {
      const double steps = g.param / grid.delta_theta();
      const double rounded = std::round(steps);
      if (std::abs(steps - rounded) < 1e-9) {
        // exact index shift |theta> -> |theta + Theta>, cyclic over the range
        const long shift = long(rounded);
        VectorXcd out(N);
        for (int s = 0; s < N; ++s) out(((s + shift) % N + N) % N) = pos(s);
        return out;
      }
      VectorXcd mom = to_momentum(grid, pos);
      for (int t = 0; t < N; ++t) mom(t) *= std::polar(1.0, -momentum_value(grid, t) * g.param);
      return from_momentum(grid, mom);
    }
    case GateKind::Z: {
      VectorXcd out(N);
      for (int s = 0; s < N; ++s) out(s) = std::polar(1.0, g.param * grid.theta_pos(s)) * pos(s);
      return out;
    }
    case GateKind::U: {
      VectorXcd mom = to_momentum(grid, pos);
      for (int t = 0; t < N; ++t) {
        const double k = momentum_value(grid, t);
        mom(t) *= std::polar(1.0, -k * k * g.param);
      }
      return from_momentum(grid, mom);
    }
    case GateKind::SlmPhase: {
      if (g.table.size() != grid.m_theta && g.table.size() != N)
        throw std::invalid_argument("slm: phase table must cover the theta_bar grid or the full range");
      VectorXcd out(N);
      for (int s = 0; s < N; ++s) {
        const double ph = (g.table.size() == N) ? g.table(s) : g.table(s % grid.m_theta);
        out(s) = std::polar(1.0, ph) * pos(s);
      }
      return out;
    }
    case GateKind::Reflect:
      return apply_reflection_amp(grid, g.param, g.param2, pos);
    case GateKind::Dagger: {
      const GateSpec& in = *g.inner;
      switch (in.kind) {
        case GateKind::X: return apply_gate_amp(GateSpec::x(-in.param), grid, pos);
        case GateKind::Z: return apply_gate_amp(GateSpec::z(-in.param), grid, pos);
        case GateKind::U: return apply_gate_amp(GateSpec::u(-in.param), grid, pos);
        case GateKind::SlmPhase: return apply_gate_amp(GateSpec::slm(-in.table), grid, pos);
        case GateKind::Reflect: return apply_gate_amp(in, grid, pos);  // involution
        case GateKind::Dagger: return apply_gate_amp(*in.inner, grid, pos);
      }
    }
  }
  throw std::logic_error("apply_gate: unknown kind");
}

PositionState apply_gate(const GateSpec& g, const PositionState& s) {
  return PositionState(s.grid, apply_gate_amp(g, s.grid, s.amp));
}

ModularState apply_gate(const GateSpec& g, const ModularState& s) {
  return ModularState(s.grid,
                      zak_forward_amp(s.grid, apply_gate_amp(g, s.grid, zak_inverse_amp(s.grid, s.amp))));
}

PositionState apply_X(double theta, const PositionState& s) { return apply_gate(GateSpec::x(theta), s); }
ModularState apply_X(double theta, const ModularState& s) { return apply_gate(GateSpec::x(theta), s); }
PositionState apply_Z(double k, const PositionState& s) { return apply_gate(GateSpec::z(k), s); }
ModularState apply_Z(double k, const ModularState& s) { return apply_gate(GateSpec::z(k), s); }
PositionState apply_U(double phi, const PositionState& s) { return apply_gate(GateSpec::u(phi), s); }
ModularState apply_U(double phi, const ModularState& s) { return apply_gate(GateSpec::u(phi), s); }
PositionState apply_reflection(double theta_p, double dtheta, const PositionState& s) {
  return apply_gate(GateSpec::reflect(theta_p, dtheta), s);
}
ModularState apply_reflection(double theta_p, double dtheta, const ModularState& s) {
  return apply_gate(GateSpec::reflect(theta_p, dtheta), s);
}

namespace {

// Per-grid cache of the DFT matrix used by momentum-space gate assembly.
const MatrixXcd& cached_dft(const ModularGrid& g) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MatrixXcd>> store;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = store[{g.m_theta, g.n_k}];
  if (!slot) slot = std::make_shared<const MatrixXcd>(dft_matrix(g));
  return *slot;
}

MatrixXcd diagonal_gate_matrix(const GateSpec& g, const ModularGrid& grid) {
  const int N = grid.total_dim();
  VectorXcd phases = apply_gate_amp(g, grid, VectorXcd::Ones(N));
  MatrixXcd m = MatrixXcd::Zero(N, N);
  m.diagonal() = phases;
  return m;
}

MatrixXcd momentum_phase_matrix(const ModularGrid& grid, const VectorXcd& phases) {
  const MatrixXcd& f = cached_dft(grid);
  return f.adjoint() * phases.asDiagonal() * f;
}

}  // namespace

MatrixXcd gate_matrix_position(const GateSpec& g, const ModularGrid& grid) {
  const int N = grid.total_dim();
  switch (g.kind) {
    case GateKind::Z:
    case GateKind::SlmPhase:
      return diagonal_gate_matrix(g, grid);
    case GateKind::X: {
      const double steps = g.param / grid.delta_theta();
      if (std::abs(steps - std::round(steps)) < 1e-9) {
        MatrixXcd m = MatrixXcd::Zero(N, N);
        const long shift = long(std::round(steps));
        for (int s = 0; s < N; ++s) m(((s + shift) % N + N) % N, s) = 1.0;
        return m;
      }
      VectorXcd phases(N);
      for (int t = 0; t < N; ++t) phases(t) = std::polar(1.0, -momentum_value(grid, t) * g.param);
      return momentum_phase_matrix(grid, phases);
    }
    case GateKind::U: {
      VectorXcd phases(N);
      for (int t = 0; t < N; ++t) {
        const double k = momentum_value(grid, t);
        phases(t) = std::polar(1.0, -k * k * g.param);
      }
      return momentum_phase_matrix(grid, phases);
    }
    case GateKind::Reflect: {
      MatrixXcd m = MatrixXcd::Zero(N, N);
      VectorXcd e = VectorXcd::Zero(N);
      for (int c = 0; c < N; ++c) {
        e(c) = 1.0;
        m.col(c) = apply_gate_amp(g, grid, e);
        e(c) = 0.0;
      }
      return m;
    }
    case GateKind::Dagger:
      return gate_matrix_position(*g.inner, grid).adjoint();
  }
  throw std::logic_error("gate_matrix_position: unknown kind");
}

namespace {
const MatrixXcd& cached_zak(const ModularGrid& g) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MatrixXcd>> store;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = store[{g.m_theta, g.n_k}];
  if (!slot) slot = std::make_shared<const MatrixXcd>(zak_matrix(g));
  return *slot;
}
}  // namespace

MatrixXcd gate_to_matrix(const GateSpec& g, const ModularGrid& grid) {
  const MatrixXcd& Z = cached_zak(grid);
  return Z * gate_matrix_position(g, grid) * Z.adjoint() / double(grid.n_k);
}

MatrixXcd sequence_to_matrix(const std::vector<GateSpec>& seq, const ModularGrid& grid) {
  MatrixXcd M = MatrixXcd::Identity(grid.total_dim(), grid.total_dim());
  for (const auto& g : seq) M = gate_to_matrix(g, grid) * M;
  return M;
}

std::vector<GateSpec> conjugated_shift(double phi, double k) {
  if (phi == 0.0) return {GateSpec::z(k)};
  return {GateSpec::dagger(GateSpec::u(0.5 * phi)), GateSpec::z(k), GateSpec::u(0.5 * phi)};
}

const MatrixXcd& GateCache::matrix(const GateSpec& g) {
  const std::string key = cache_key(g);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = store_.find(key);
  if (it == store_.end()) {
    auto m = std::make_shared<const MatrixXcd>(gate_to_matrix(g, grid_));
    pinned_.push_back(m);
    it = store_.emplace(key, std::move(m)).first;
  }
  return *it->second;
}

double unitarity_residual(const MatrixXcd& m) {
  return (m * m.adjoint() - MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

}  // namespace mvlab

#include "mvlab/compiler.hpp"

#include <cmath>

namespace mvlab {

namespace {

VectorXd const_mask(const ModularGrid& g, double value) {
  return VectorXd::Constant(g.m_theta, value);
}

// Phase profile over theta_bar for the d=3 pair-swap diagonal arm: u on
// region j, -u on region k, pi/2 on the passive regions (kills their
// diagonal), with u measured from each region's own start.
VectorXd pair_mask(const ModularGrid& g, int d, int j, int k, double offset) {
  VectorXd mask = const_mask(g, 0.5 * kPi);
  const int step = g.m_theta / d;
  for (int i = 0; i < step; ++i) {
    const double u = g.theta_bar(i) + offset;
    mask(j * step + i) = u;
    mask(k * step + i) = -u;
  }
  return mask;
}

}  // namespace

std::string TargetSpec::name() const {
  if (sigma)
    return "sigma2_d" + std::to_string(d) + "_" + std::to_string(sigma_j + 1) +
           std::to_string(sigma_k + 1);
  return std::string(axis == Axis::Theta ? "gamma" : "lambda") + "_d" + std::to_string(d) +
         "_alpha" + std::to_string(alpha);
}

namespace {

// Swap of the adjacent regions t and t+1: reflect their union about the
// shared edge, then straighten each region about its own center.
void append_adjacent_swap(std::vector<GateSpec>& seq, int d, int t) {
  const double w = kPi / d;
  const double edge = 2.0 * kPi * (t + 1) / d;
  seq.push_back(GateSpec::reflect(edge, 2.0 * w));
  seq.push_back(GateSpec::reflect(edge - w, w));
  seq.push_back(GateSpec::reflect(edge + w, w));
}

}  // namespace

std::vector<GateSpec> sigma_swap_reflections(int d, int j, int k) {
  if (j > k) std::swap(j, k);
  if (j < 0 || k >= d || j == k) throw std::invalid_argument("sigma swap: bad region pair");
  if (d == 2) {
    // full-circle reflection composed with the two half-circle straighteners
    return {GateSpec::reflect(0.0, kPi), GateSpec::reflect(0.5 * kPi, 0.5 * kPi),
            GateSpec::reflect(1.5 * kPi, 0.5 * kPi)};
  }
  // (j k) as a chain of adjacent transpositions.
  std::vector<GateSpec> seq;
  for (int t = j; t < k; ++t) append_adjacent_swap(seq, d, t);
  for (int t = k - 2; t >= j; --t) append_adjacent_swap(seq, d, t);
  return seq;
}

GateProgram compile_gamma(const TargetSpec& t, const ModularGrid& g) {
  check_divisibility(g, t.d, t.axis);
  GateProgram p;
  p.target = t.name();

  if (t.sigma) {
    if (t.axis != Axis::Theta) throw std::invalid_argument("sigma targets are theta-axis");
    p.pre = sigma_swap_reflections(t.d, t.sigma_j, t.sigma_k);
    return p;
  }

  if (t.axis == Axis::K) {
    if (t.d == 2 && t.alpha == 1) {
      p.node = InterferometerNode{{}, {GateSpec::x(2.0 * kPi)}, 0.0};
      return p;
    }
    throw std::invalid_argument("unsupported K-axis gate target: " + t.name());
  }

  if (t.d == 2) {
    switch (t.alpha) {
      case 1:
        p.node = InterferometerNode{{}, {GateSpec::z(1.0)}, 0.0};
        return p;
      case 3:
        p.pre = {GateSpec::dagger(GateSpec::u(0.5 * kPi))};
        p.node = InterferometerNode{{}, {GateSpec::z(1.0)}, 0.0};
        p.post = {GateSpec::u(0.5 * kPi)};
        return p;
      case 2:
        p.pre = {GateSpec::dagger(GateSpec::slm(half_region_mask(g))),
                 GateSpec::dagger(GateSpec::u(0.5 * kPi))};
        p.node = InterferometerNode{{}, {GateSpec::z(1.0)}, 0.0};
        p.post = {GateSpec::u(0.5 * kPi), GateSpec::slm(half_region_mask(g))};
        return p;
      default:
        throw std::invalid_argument("d=2 gate targets use alpha in {1,2,3}");
    }
  }

  if (t.d == 3) {
    const GellmannSlot slot = gellmann_slot(3, t.alpha);
    if (slot.diagonal) {
      if (t.alpha == 3) {
        p.node = InterferometerNode{{}, {GateSpec::z(1.0)}, 0.0};
      } else {
        p.node = InterferometerNode{
            {}, {GateSpec::z(1.0), GateSpec::slm(const_mask(g, -0.5 * kPi))}, 0.0};
      }
      return p;
    }
    const double offset = slot.symmetric ? 0.0 : 0.5 * kPi;
    p.node = InterferometerNode{sigma_swap_reflections(3, slot.j, slot.k),
                                {GateSpec::slm(pair_mask(g, 3, slot.j, slot.k, offset))},
                                0.0};
    return p;
  }
  throw std::invalid_argument("unsupported gate-recipe dimension d = " + std::to_string(t.d));
}

MatrixXcd program_to_matrix(const GateProgram& p, const ModularGrid& g) {
  const MatrixXcd pre = sequence_to_matrix(p.pre, g);
  const MatrixXcd post = sequence_to_matrix(p.post, g);
  if (!p.node) return post * pre;
  const MatrixXcd sd =
      sequence_to_matrix(p.node->arm_s, g) * sequence_to_matrix(p.node->arm_d, g);
  MatrixXcd node = sd + std::polar(1.0, p.node->eta) * sd.adjoint();
  if (p.node->has_second_pair) {
    const MatrixXcd sd2 =
        sequence_to_matrix(p.node->arm_s2, g) * sequence_to_matrix(p.node->arm_d2, g);
    node = std::cos(p.node->beta) * node +
           std::sin(p.node->beta) * (std::polar(1.0, p.node->epsilon) * sd2 +
                                     std::polar(1.0, -p.node->epsilon) * sd2.adjoint());
  }
  return post * node * pre;
}

namespace {

template <typename BlockFn>
MatrixXcd conv_rebuild(const ModularGrid& g, int d, Axis axis, BlockFn&& block) {
  const ConventionTable t = build_convention_table(g, d, axis);
  BlockOperator op = make_block_operator(g, d, axis);
  for (int jf = 0; jf < op.fund_theta_count(); ++jf)
    for (int lf = 0; lf < op.fund_k_count(); ++lf) {
      const int f = op.fund_index(jf, lf);
      op.blocks[f] = from_convention_block(t, block(g.theta_bar(jf), g.k_bar(lf)), f);
    }
  return block_to_dense(op);
}

}  // namespace

MatrixXcd direct_construction(const TargetSpec& t, const ModularGrid& g) {
  if (t.sigma) {
    if (t.d == 2) return period_local_shift_matrix(g, 2, Axis::Theta);
    // period-local swap of regions j and k as a position permutation
    const int step = g.m_theta / t.d;
    const int N = g.total_dim();
    MatrixXcd s = MatrixXcd::Zero(N, N);
    for (int j = 0; j < g.m_theta; ++j) {
      int jm = j;
      if (j / step == t.sigma_j) jm = j + (t.sigma_k - t.sigma_j) * step;
      else if (j / step == t.sigma_k) jm = j - (t.sigma_k - t.sigma_j) * step;
      for (int n = 0; n < g.n_k; ++n) s(g.pos_index(jm, n), g.pos_index(j, n)) = 1.0;
    }
    const MatrixXcd Z = zak_matrix(g);
    return Z * s * Z.adjoint() / double(g.n_k);
  }

  if (t.axis == Axis::K && t.d == 2 && t.alpha == 1) {
    WeightTable F = weight_from_function(
        g, +[](double, double k) { return Complex(2.0 * std::cos(2.0 * kPi * k), 0.0); });
    return block_to_dense(build_delta(g, F, 2, Axis::K));
  }

  if (t.d == 2) {
    switch (t.alpha) {
      case 1: {
        WeightTable F = weight_from_function(
            g, +[](double th, double) { return Complex(2.0 * std::cos(th), 0.0); });
        return block_to_dense(build_delta(g, F, 2, Axis::Theta));
      }
      case 2:
        // gate-native envelope of the quadratic-gate conjugates
        return conv_rebuild(g, 2, Axis::Theta, +[](double th, double k) -> MatrixXcd {
          return 2.0 * std::cos(th + kPi * k) * gellmann(2, 1);
        });
      case 3:
        return conv_rebuild(g, 2, Axis::Theta, +[](double th, double k) -> MatrixXcd {
          return 2.0 * std::cos(th + kPi * k) * gellmann(2, 2);
        });
    }
  }

  if (t.d == 3) {
    const GellmannSlot slot = gellmann_slot(3, t.alpha);
    if (slot.diagonal) {
      const double phase = (t.alpha == 3) ? 0.0 : -0.5 * kPi;
      WeightTable F(g.m_theta, g.n_k);
      for (int j = 0; j < g.m_theta; ++j)
        for (int l = 0; l < g.n_k; ++l)
          F(j, l) = 2.0 * std::cos(g.theta_bar(j) + phase);
      return block_to_dense(build_delta(g, F, 3, Axis::Theta));
    }
    // mu = u(theta_f) + 2*pi*(k-j)*k_bar/3, with pi/2 added for the
    // antisymmetric member; the k_bar term is the swap's Zak phase.
    const double off = slot.symmetric ? 0.0 : 0.5 * kPi;
    MatrixXcd ls = MatrixXcd::Zero(3, 3), la = MatrixXcd::Zero(3, 3);
    ls(slot.j, slot.k) = 1.0;
    ls(slot.k, slot.j) = 1.0;
    la(slot.j, slot.k) = Complex(0, -1);
    la(slot.k, slot.j) = Complex(0, 1);
    return conv_rebuild(g, 3, Axis::Theta, [&](double th, double k) -> MatrixXcd {
      const double mu = th + off + 2.0 * kPi * (slot.k - slot.j) * k / 3.0;
      return 2.0 * (std::cos(mu) * ls + std::sin(mu) * la);
    });
  }
  throw std::invalid_argument("no direct construction for target " + t.name());
}

VerifyReport verify(const GateProgram& p, const TargetSpec& t, const ModularGrid& g) {
  VerifyReport rep;
  rep.target = t.name();
  rep.max_deviation =
      (program_to_matrix(p, g) - direct_construction(t, g)).cwiseAbs().maxCoeff();
  rep.pass = rep.max_deviation < rep.tolerance;
  return rep;
}

std::vector<TargetSpec> supported_targets(const ModularGrid& g) {
  std::vector<TargetSpec> ts;
  for (int a = 1; a <= 3; ++a) ts.push_back({2, a, Axis::Theta, false, 0, 1});
  if (g.m_theta % 3 == 0)
    for (int a = 1; a <= 8; ++a) ts.push_back({3, a, Axis::Theta, false, 0, 1});
  if (g.n_k % 2 == 0) ts.push_back({2, 1, Axis::K, false, 0, 1});
  ts.push_back({2, 0, Axis::Theta, true, 0, 1});
  if (g.m_theta % 3 == 0) ts.push_back({3, 0, Axis::Theta, true, 0, 2});
  return ts;
}

MzProbabilities mz_probabilities(const MatrixXcd& s_op, const MatrixXcd& d_op, double eta,
                                 const ModularState& s) {
  require_normalized(s);
  const VectorXcd sd_psi = s_op * (d_op * s.amp);
  const Complex val = s.amp.dot(sd_psi) * s.grid.delta_theta() * s.grid.delta_k();
  const double r = (std::polar(1.0, -eta) * val).real();
  if (std::abs(r) > 1.0 + 1e-9)
    throw std::invalid_argument("mz_probabilities: |<SD>| = " + std::to_string(std::abs(r)) +
                                " exceeds 1; norm precondition violated");
  return {0.5 * (1.0 + r), 0.5 * (1.0 - r)};
}

MzProbabilities mz_probabilities(const BlockOperator& s_op, const BlockOperator& d_op, double eta,
                                 const ModularState& s) {
  require_normalized(s);
  const BlockOperator sd = block_product(s_op, d_op);
  const Complex val = expectation(sd, s);
  const double r = (std::polar(1.0, -eta) * val).real();
  if (std::abs(r) > 1.0 + 1e-9)
    throw std::invalid_argument("mz_probabilities: norm precondition violated");
  return {0.5 * (1.0 + r), 0.5 * (1.0 - r)};
}

MzOutput mz_output_state(const MatrixXcd& s_op, const MatrixXcd& d_op, double eta, int port,
                         const ModularState& s) {
  require_normalized(s);
  if (port != 1 && port != 2) throw std::invalid_argument("mz_output_state: port must be 1 or 2");
  const double sign = (port == 1) ? 1.0 : -1.0;
  const VectorXcd fwd = s_op * (d_op * s.amp);
  const VectorXcd bwd = d_op.adjoint() * (s_op.adjoint() * s.amp);
  VectorXcd out = 0.5 * (fwd + sign * std::polar(1.0, eta) * bwd);
  MzOutput res{ModularState(s.grid, out), 0.0};
  const double norm2 = out.squaredNorm() * s.grid.delta_theta() * s.grid.delta_k();
  res.success_probability = norm2;
  if (norm2 > 1e-24) res.state.amp /= std::sqrt(norm2);
  return res;
}

}  // namespace mvlab

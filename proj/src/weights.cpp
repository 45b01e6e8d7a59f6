#include "mvlab/weights.hpp"

#include <cmath>

namespace mvlab {

namespace {

// Samples along the block axis at fixed spectator coordinate.
// axis Theta: column l, values F(., l); axis K: row j, values F(j, .).
int axis_count(const ModularGrid& g, Axis axis) { return axis == Axis::Theta ? g.m_theta : g.n_k; }
int spectator_count(const ModularGrid& g, Axis axis) { return axis == Axis::Theta ? g.n_k : g.m_theta; }

Complex sample(const WeightTable& F, Axis axis, int a, int spec) {
  return axis == Axis::Theta ? F(a, spec) : F(spec, a);
}

}  // namespace

WeightValidation validate_weight(const WeightTable& F, const ModularGrid& g, int d, Axis axis,
                                 double roots_tol, double edge_tol) {
  if (F.rows() != g.m_theta || F.cols() != g.n_k)
    throw std::invalid_argument("weight table must be m_theta x n_k");
  check_divisibility(g, d, axis);

  WeightValidation v;
  v.d = d;
  v.axis = axis;
  const int A = axis_count(g, axis);
  const int S = spectator_count(g, axis);
  const int fund = A / d;

  v.branch_residuals.assign(d, 0.0);
  for (int branch = 0; branch < d; ++branch) {
    double res = 0.0;
    for (int spec = 0; spec < S; ++spec)
      for (int a = 0; a < fund; ++a) {
        const Complex f0 = sample(F, axis, a, spec);
        for (int n = 1; n < d; ++n) {
          const Complex cn = std::polar(1.0, 2.0 * kPi * n * branch / d);
          res = std::max(res, std::abs(sample(F, axis, a + n * fund, spec) - cn * f0));
        }
      }
    v.branch_residuals[branch] = res;
  }

  int best = 0;
  for (int b = 1; b < d; ++b)
    if (v.branch_residuals[b] < v.branch_residuals[best]) best = b;
  v.roots_residual = v.branch_residuals[best];

  // Edge continuity: the value entering domain 1, c_1*F(0), must continue the
  // fundamental samples at the domain end within one discrete step.  The
  // tolerance is a Lipschitz bound taken from the table's own increments.
  const Complex c1 = std::polar(1.0, 2.0 * kPi * best / d);
  double lip = 0.0;
  for (int spec = 0; spec < S; ++spec)
    for (int a = 0; a + 1 < fund; ++a)
      lip = std::max(lip, std::abs(sample(F, axis, a + 1, spec) - sample(F, axis, a, spec)));
  double edge = 0.0;
  for (int spec = 0; spec < S; ++spec) {
    const Complex f_last = sample(F, axis, fund - 1, spec);
    edge = std::max(edge, std::abs(c1 * sample(F, axis, 0, spec) - f_last));
  }
  v.edge_tolerance = edge_tol + 1.5 * lip;
  v.edge_residual = edge;

  v.pass = v.roots_residual <= roots_tol && v.edge_residual <= v.edge_tolerance;
  v.root_branch = v.pass ? best : -1;
  return v;
}

WeightSpec make_weight(const WeightTable& F, const ModularGrid& g, int d, Axis axis) {
  WeightSpec w;
  w.grid = g;
  w.d = d;
  w.axis = axis;
  w.samples = F;
  w.validation = validate_weight(F, g, d, axis);
  if (!w.validation.pass)
    throw std::invalid_argument("weight fails the roots-of-unity/continuity conditions (residual " +
                                std::to_string(w.validation.roots_residual) + ")");
  return w;
}

MatrixXcd fundamental_samples(const WeightTable& F, const ModularGrid& g, int d, Axis axis) {
  check_divisibility(g, d, axis);
  if (axis == Axis::Theta) return F.topRows(g.m_theta / d);
  return F.leftCols(g.n_k / d);
}

WeightTable weight_from_function(const ModularGrid& g, Complex (*f)(double, double)) {
  WeightTable F(g.m_theta, g.n_k);
  for (int j = 0; j < g.m_theta; ++j)
    for (int l = 0; l < g.n_k; ++l) F(j, l) = f(g.theta_bar(j), g.k_bar(l));
  return F;
}

WeightTable named_weight(const std::string& name, const ModularGrid& g) {
  if (name == "cos2")
    return weight_from_function(
        g, +[](double t, double k) { return Complex(std::cos(t - k * kPi), 0.0); });
  if (name == "exp3")
    return weight_from_function(
        g, +[](double t, double k) { return std::polar(1.0, t - k * 2.0 * kPi / 3.0); });
  if (name == "cos2K")
    return weight_from_function(
        g, +[](double, double k) { return Complex(std::cos(2.0 * kPi * k), 0.0); });
  if (name == "exp3K")
    return weight_from_function(
        g, +[](double, double k) { return std::polar(1.0, 2.0 * kPi * k); });
  if (name == "const1")
    return weight_from_function(g, +[](double, double) { return Complex(1.0, 0.0); });
  if (name == "cos1")  // plain cos(theta_bar): valid for d=2, fails d=3
    return weight_from_function(g, +[](double t, double) { return Complex(std::cos(t), 0.0); });
  throw std::invalid_argument("unknown named weight: " + name);
}

std::vector<std::string> weight_registry_names() {
  return {"cos2", "exp3", "cos2K", "exp3K", "const1", "cos1"};
}

}  // namespace mvlab

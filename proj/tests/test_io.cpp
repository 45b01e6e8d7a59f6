#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "mvlab/io.hpp"

using namespace mvlab;

namespace {
const ModularGrid g48 = make_grid(48, 8);
}

TEST_CASE("state JSON round-trips bit-exactly") {
  const ModularState s = random_state(g48, 51);
  const json j = state_to_json(s);
  const ModularState back = modular_state_from_json(json::parse(j.dump()));
  CHECK(back.grid == s.grid);
  for (int i = 0; i < s.amp.size(); ++i) {
    CHECK(back.amp(i).real() == s.amp(i).real());  // bitwise equality required
    CHECK(back.amp(i).imag() == s.amp(i).imag());
  }

  const PositionState p = zak_inverse(s);
  const PositionState pback = position_state_from_json(json::parse(state_to_json(p).dump()));
  for (int i = 0; i < p.amp.size(); ++i) CHECK(pback.amp(i) == p.amp(i));

  CHECK_THROWS_AS(position_state_from_json(state_to_json(s)), std::invalid_argument);
}

TEST_CASE("gate and program JSON round-trips") {
  VectorXd mask(g48.m_theta);
  for (int i = 0; i < mask.size(); ++i) mask(i) = 0.01 * i * i;
  const std::vector<GateSpec> gates = {GateSpec::x(0.7), GateSpec::z(-1.5), GateSpec::u(0.25 * kPi),
                                       GateSpec::slm(mask),
                                       GateSpec::reflect(0.5 * kPi, 0.25 * kPi),
                                       GateSpec::dagger(GateSpec::u(0.5 * kPi))};
  for (const GateSpec& g : gates) {
    const GateSpec back = gate_from_json(json::parse(gate_to_json(g).dump()));
    const MatrixXcd ma = gate_to_matrix(g, g48);
    const MatrixXcd mb = gate_to_matrix(back, g48);
    CHECK((ma - mb).cwiseAbs().maxCoeff() == 0.0);
  }

  const TargetSpec t{2, 3, Axis::Theta, false, 0, 1};
  const GateProgram p = compile_gamma(t, g48);
  const GateProgram back = program_from_json(json::parse(program_to_json(p).dump()));
  CHECK((program_to_matrix(p, g48) - program_to_matrix(back, g48)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.target == p.target);
}

TEST_CASE("block operator JSON round-trip") {
  const BlockOperator op = build_gamma(g48, 2, 1, named_weight("cos2", g48), Axis::Theta);
  const BlockOperator back = block_operator_from_json(json::parse(block_operator_to_json(op).dump()));
  CHECK(back.d == op.d);
  CHECK((block_to_dense(back) - block_to_dense(op)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectrum CSV has one row per fundamental point") {
  const BlockOperator op = build_gamma(g48, 2, 1, named_weight("cos2", g48), Axis::Theta);
  const std::string csv = spectrum_to_csv(op);
  const size_t rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == size_t(op.fund_count() + 1));
}

TEST_CASE("atomic write and manifest round-trip") {
  const std::string path = "/tmp/mvlab_io_test.json";
  RunManifest m;
  m.command = "gamma build";
  m.parameters = {"gamma", "build", "--d", "2"};
  m.grid = g48;
  m.seed = 7;
  m.outputs = {"op.json"};
  m.wall_clock_seconds = 0.25;
  atomic_write(path, manifest_to_json(m).dump(2));
  const RunManifest back = manifest_from_json(json::parse(read_file(path)));
  CHECK(back.command == m.command);
  CHECK(back.parameters == m.parameters);
  CHECK(back.grid == m.grid);
  CHECK(back.seed == m.seed);
  std::remove(path.c_str());
}

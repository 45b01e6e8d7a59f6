#include "mvlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mvlab {

namespace {

json amplitudes_to_json(const VectorXcd& amp) {
  json arr = json::array();
  for (int i = 0; i < amp.size(); ++i) arr.push_back({amp(i).real(), amp(i).imag()});
  return arr;
}

VectorXcd amplitudes_from_json(const json& arr) {
  VectorXcd amp(arr.size());
  for (size_t i = 0; i < arr.size(); ++i)
    amp(i) = Complex(arr[i][0].get<double>(), arr[i][1].get<double>());
  return amp;
}

std::string axis_name(Axis a) { return a == Axis::Theta ? "theta" : "k"; }
Axis axis_from_name(const std::string& s) {
  if (s == "theta") return Axis::Theta;
  if (s == "k") return Axis::K;
  throw std::invalid_argument("unknown axis: " + s);
}

}  // namespace

json grid_to_json(const ModularGrid& g) { return {{"m_theta", g.m_theta}, {"n_k", g.n_k}}; }

ModularGrid grid_from_json(const json& j) {
  return ModularGrid(j.at("m_theta").get<int>(), j.at("n_k").get<int>());
}

json state_to_json(const ModularState& s) {
  return {{"grid", grid_to_json(s.grid)},
          {"representation", "modular"},
          {"amplitudes", amplitudes_to_json(s.amp)}};
}

json state_to_json(const PositionState& s) {
  return {{"grid", grid_to_json(s.grid)},
          {"representation", "position"},
          {"amplitudes", amplitudes_to_json(s.amp)}};
}

ModularState modular_state_from_json(const json& j) {
  if (j.value("representation", "modular") != "modular")
    throw std::invalid_argument("expected a modular-representation state");
  return ModularState(grid_from_json(j.at("grid")), amplitudes_from_json(j.at("amplitudes")));
}

PositionState position_state_from_json(const json& j) {
  if (j.value("representation", "position") != "position")
    throw std::invalid_argument("expected a position-representation state");
  return PositionState(grid_from_json(j.at("grid")), amplitudes_from_json(j.at("amplitudes")));
}

json gate_to_json(const GateSpec& g) {
  switch (g.kind) {
    case GateKind::X: return {{"gate", "X"}, {"theta", g.param}};
    case GateKind::Z: return {{"gate", "Z"}, {"k", g.param}};
    case GateKind::U: return {{"gate", "U"}, {"phi", g.param}};
    case GateKind::SlmPhase: {
      json t = json::array();
      for (int i = 0; i < g.table.size(); ++i) t.push_back(g.table(i));
      return {{"gate", "slm"}, {"phase", t}};
    }
    case GateKind::Reflect:
      return {{"gate", "reflect"}, {"theta_p", g.param}, {"delta_theta", g.param2}};
    case GateKind::Dagger: return {{"gate", "dagger"}, {"of", gate_to_json(*g.inner)}};
  }
  throw std::logic_error("gate_to_json: unknown kind");
}

GateSpec gate_from_json(const json& j) {
  const std::string kind = j.at("gate").get<std::string>();
  if (kind == "X") return GateSpec::x(j.at("theta").get<double>());
  if (kind == "Z") return GateSpec::z(j.at("k").get<double>());
  if (kind == "U") return GateSpec::u(j.at("phi").get<double>());
  if (kind == "slm") {
    const auto& arr = j.at("phase");
    VectorXd t(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) t(i) = arr[i].get<double>();
    return GateSpec::slm(std::move(t));
  }
  if (kind == "reflect")
    return GateSpec::reflect(j.at("theta_p").get<double>(), j.at("delta_theta").get<double>());
  if (kind == "dagger") return GateSpec::dagger(gate_from_json(j.at("of")));
  throw std::invalid_argument("unknown gate kind: " + kind);
}

namespace {
json gate_list_to_json(const std::vector<GateSpec>& seq) {
  json arr = json::array();
  for (const auto& g : seq) arr.push_back(gate_to_json(g));
  return arr;
}
std::vector<GateSpec> gate_list_from_json(const json& arr) {
  std::vector<GateSpec> seq;
  for (const auto& g : arr) seq.push_back(gate_from_json(g));
  return seq;
}
}  // namespace

json program_to_json(const GateProgram& p) {
  json j = {{"target", p.target},
            {"convention_version", p.convention_version},
            {"pre", gate_list_to_json(p.pre)},
            {"post", gate_list_to_json(p.post)}};
  if (p.node) {
    j["node"] = {{"arm_s", gate_list_to_json(p.node->arm_s)},
                 {"arm_d", gate_list_to_json(p.node->arm_d)},
                 {"eta", p.node->eta}};
    if (p.node->has_second_pair) {
      j["node"]["arm_s2"] = gate_list_to_json(p.node->arm_s2);
      j["node"]["arm_d2"] = gate_list_to_json(p.node->arm_d2);
      j["node"]["beta"] = p.node->beta;
      j["node"]["epsilon"] = p.node->epsilon;
    }
  }
  return j;
}

GateProgram program_from_json(const json& j) {
  GateProgram p;
  p.target = j.value("target", "");
  p.convention_version = j.value("convention_version", "ct-v1");
  p.pre = gate_list_from_json(j.at("pre"));
  p.post = gate_list_from_json(j.at("post"));
  if (j.contains("node")) {
    InterferometerNode n;
    n.arm_s = gate_list_from_json(j.at("node").at("arm_s"));
    n.arm_d = gate_list_from_json(j.at("node").at("arm_d"));
    n.eta = j.at("node").at("eta").get<double>();
    if (j.at("node").contains("beta")) {
      n.has_second_pair = true;
      n.arm_s2 = gate_list_from_json(j.at("node").at("arm_s2"));
      n.arm_d2 = gate_list_from_json(j.at("node").at("arm_d2"));
      n.beta = j.at("node").at("beta").get<double>();
      n.epsilon = j.at("node").at("epsilon").get<double>();
    }
    p.node = std::move(n);
  }
  return p;
}

json block_operator_to_json(const BlockOperator& op) {
  json blocks = json::array();
  for (const auto& b : op.blocks) {
    json m = json::array();
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) m.push_back({b(r, c).real(), b(r, c).imag()});
    blocks.push_back(std::move(m));
  }
  return {{"grid", grid_to_json(op.grid)},
          {"d", op.d},
          {"axis", axis_name(op.axis)},
          {"blocks", blocks}};
}

BlockOperator block_operator_from_json(const json& j) {
  BlockOperator op = make_block_operator(grid_from_json(j.at("grid")), j.at("d").get<int>(),
                                         axis_from_name(j.at("axis").get<std::string>()));
  const auto& blocks = j.at("blocks");
  if (int(blocks.size()) != op.fund_count())
    throw std::invalid_argument("block operator: wrong block count");
  for (int f = 0; f < op.fund_count(); ++f) {
    const auto& m = blocks[f];
    for (int r = 0; r < op.d; ++r)
      for (int c = 0; c < op.d; ++c) {
        const auto& e = m[r * op.d + c];
        op.blocks[f](r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      }
  }
  return op;
}

json validation_to_json(const WeightValidation& v) {
  return {{"pass", v.pass},
          {"d", v.d},
          {"axis", axis_name(v.axis)},
          {"root_branch", v.root_branch},
          {"roots_residual", v.roots_residual},
          {"edge_residual", v.edge_residual},
          {"edge_tolerance", v.edge_tolerance},
          {"branch_residuals", v.branch_residuals}};
}

json verify_report_to_json(const VerifyReport& r) {
  return {{"target", r.target},
          {"max_deviation", r.max_deviation},
          {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

json weight_table_to_json(const WeightTable& F, const ModularGrid& g) {
  json vals = json::array();
  for (int j = 0; j < g.m_theta; ++j)
    for (int l = 0; l < g.n_k; ++l) vals.push_back({F(j, l).real(), F(j, l).imag()});
  return {{"grid", grid_to_json(g)}, {"values", vals}};
}

WeightTable weight_table_from_json(const json& j, const ModularGrid& g) {
  const ModularGrid stored = grid_from_json(j.at("grid"));
  if (stored != g) throw std::invalid_argument("weight table grid mismatch");
  const auto& vals = j.at("values");
  if (int(vals.size()) != g.total_dim()) throw std::invalid_argument("weight table size mismatch");
  WeightTable F(g.m_theta, g.n_k);
  size_t idx = 0;
  for (int jj = 0; jj < g.m_theta; ++jj)
    for (int l = 0; l < g.n_k; ++l, ++idx)
      F(jj, l) = Complex(vals[idx][0].get<double>(), vals[idx][1].get<double>());
  return F;
}

namespace {
std::string gate_line(const GateSpec& g) {
  char buf[80];
  switch (g.kind) {
    case GateKind::X: std::snprintf(buf, sizeof buf, "X(%.6g)", g.param); return buf;
    case GateKind::Z: std::snprintf(buf, sizeof buf, "Z(%.6g)", g.param); return buf;
    case GateKind::U: std::snprintf(buf, sizeof buf, "U(%.6g)", g.param); return buf;
    case GateKind::SlmPhase:
      std::snprintf(buf, sizeof buf, "SLM(%zu samples)", size_t(g.table.size()));
      return buf;
    case GateKind::Reflect:
      std::snprintf(buf, sizeof buf, "R(theta_p=%.6g, dtheta=%.6g)", g.param, g.param2);
      return buf;
    case GateKind::Dagger: return gate_line(*g.inner) + "^dagger";
  }
  return "?";
}
}  // namespace

std::string program_listing(const GateProgram& p) {
  std::string out = "target: " + p.target + "\n";
  for (const auto& g : p.pre) out += "  " + gate_line(g) + "\n";
  if (p.node) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", p.node->eta);
    out += "  interferometer node (eta = " + std::string(buf) + ")\n";
    for (const auto& g : p.node->arm_s) out += "    arm S: " + gate_line(g) + "\n";
    if (p.node->arm_s.empty()) out += "    arm S: identity\n";
    for (const auto& g : p.node->arm_d) out += "    arm D: " + gate_line(g) + "\n";
    if (p.node->arm_d.empty()) out += "    arm D: identity\n";
    if (p.node->has_second_pair) {
      std::snprintf(buf, sizeof buf, "%.6g / %.6g", p.node->beta, p.node->epsilon);
      out += "  second arm pair (beta / epsilon = " + std::string(buf) + ")\n";
      for (const auto& g : p.node->arm_s2) out += "    arm S2: " + gate_line(g) + "\n";
      for (const auto& g : p.node->arm_d2) out += "    arm D2: " + gate_line(g) + "\n";
    }
  }
  for (const auto& g : p.post) out += "  " + gate_line(g) + "\n";
  return out;
}

std::string spectrum_to_csv(const BlockOperator& op) {
  std::string out = "theta_bar,k_bar";
  for (int i = 0; i < op.d; ++i) out += ",eig" + std::to_string(i);
  out += "\n";
  char buf[64];
  for (const auto& row : block_spectrum(op)) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", row.theta_bar, row.k_bar);
    out += buf;
    for (int i = 0; i < row.eigenvalues.size(); ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", row.eigenvalues(i));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp);
    f << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

json manifest_to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"parameters", m.parameters},
          {"grid", grid_to_json(m.grid)},
          {"seed", m.seed},
          {"convention_table_version", m.convention_version},
          {"outputs", m.outputs},
          {"wall_clock_seconds", m.wall_clock_seconds}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.parameters = j.at("parameters").get<std::vector<std::string>>();
  m.grid = grid_from_json(j.at("grid"));
  m.seed = j.at("seed").get<unsigned long long>();
  m.convention_version = j.value("convention_table_version", "ct-v1");
  m.outputs = j.value("outputs", std::vector<std::string>{});
  m.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  return m;
}

}  // namespace mvlab

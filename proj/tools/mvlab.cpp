// Command-line front end: state preparation, operator construction and
// validation, Bloch/Bell scans, gate-program compilation and interferometer
// simulation.  Every run writes a manifest; fixed seeds make reruns
// byte-identical.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "mvlab/io.hpp"

using namespace mvlab;

namespace {

struct GlobalOpts {
  std::string grid = "48x8";
  unsigned long long seed = 12345;
  std::string out_dir = ".";
  int json_indent = 2;
};

ModularGrid parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw CLI::ValidationError("--grid", "expected MxN");
  return make_grid(std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1)));
}

std::vector<Complex> parse_spinor(const std::string& s) {
  std::vector<Complex> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ';')) {
    const auto comma = part.find(',');
    if (comma == std::string::npos) {
      out.emplace_back(std::stod(part), 0.0);
    } else {
      out.emplace_back(std::stod(part.substr(0, comma)), std::stod(part.substr(comma + 1)));
    }
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
  return out;
}

class Runner {
 public:
  Runner(const GlobalOpts& opts, std::vector<std::string> argv_tail)
      : opts_(opts), start_(std::chrono::steady_clock::now()) {
    manifest_.parameters = std::move(argv_tail);
    manifest_.grid = parse_grid(opts.grid);
    manifest_.seed = opts.seed;
  }

  std::string path(const std::string& name) const { return opts_.out_dir + "/" + name; }

  void write_json(const std::string& name, const json& j) {
    atomic_write(path(name), j.dump(opts_.json_indent) + "\n");
    manifest_.outputs.push_back(name);
  }
  void write_text(const std::string& name, const std::string& text) {
    atomic_write(path(name), text);
    manifest_.outputs.push_back(name);
  }

  void finish(const std::string& command) {
    manifest_.command = command;
    manifest_.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    atomic_write(path("manifest.json"), manifest_to_json(manifest_).dump(opts_.json_indent) + "\n");
  }

  const GlobalOpts& opts() const { return opts_; }
  ModularGrid grid() const { return manifest_.grid; }

 private:
  GlobalOpts opts_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

json load(const std::string& p) { return json::parse(read_file(p)); }

// weight argument: either a registry name or a path to a tabulated table
WeightTable resolve_weight(const std::string& w, const ModularGrid& g) {
  if (w.size() > 5 && w.substr(w.size() - 5) == ".json")
    return weight_table_from_json(load(w), g);
  return named_weight(w, g);
}

// csv helper with stable float formatting
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_cli(int argc, char** argv) {
  GlobalOpts opts;
  CLI::App app{"numerical laboratory for modular-variable quantum states"};
  app.require_subcommand(1);
  app.add_option("--grid", opts.grid, "grid as MxN (theta samples x k samples)");
  app.add_option("--seed", opts.seed, "seed for randomized subcommands");
  app.add_option("--out-dir", opts.out_dir, "output directory");
  app.add_option("--json-indent", opts.json_indent, "JSON indentation");

  // ---- state ----------------------------------------------------------
  auto* state = app.add_subcommand("state", "prepare and transform states");
  state->require_subcommand(1);

  auto* prep = state->add_subcommand("prepare", "prepare a named state");
  std::string kind = "block_qubit", spinor = "1,0", out_file = "state.json";
  int j0 = 0, l0 = 0, d_param = 2;
  double center = kPi, width = 0.3, center2 = 3 * kPi, rel_phase = 0.0;
  prep->add_option("--kind", kind, "block_qubit|gaussian|comb|cat")->required();
  prep->add_option("--j0", j0);
  prep->add_option("--l0", l0);
  prep->add_option("--d", d_param);
  prep->add_option("--spinor", spinor, "semicolon-separated re,im pairs");
  prep->add_option("--center", center);
  prep->add_option("--center2", center2);
  prep->add_option("--width", width);
  prep->add_option("--phase", rel_phase);
  prep->add_option("--out", out_file);

  auto* zak = state->add_subcommand("zak", "position <-> modular transform");
  bool zak_inverse = false;
  std::string in_file = "state.json", in_b = "";
  zak->add_flag("--inverse", zak_inverse, "modular -> position");
  zak->add_option("--in", in_file)->required();
  zak->add_option("--out", out_file);

  auto* apply = state->add_subcommand("apply-gate", "apply a gate to a state");
  std::string gate_json;
  apply->add_option("--gate", gate_json, "gate as inline JSON")->required();
  apply->add_option("--in", in_file)->required();
  apply->add_option("--out", out_file);

  auto* inner = state->add_subcommand("inner", "inner product of two states");
  inner->add_option("--a", in_file)->required();
  inner->add_option("--b", in_b)->required();
  inner->add_option("--out", out_file);

  // ---- gamma ----------------------------------------------------------
  auto* gamma = app.add_subcommand("gamma", "operator construction and validation");
  gamma->require_subcommand(1);
  std::string weight = "cos2", axis_name = "theta", op_file = "op.json", state_file = "state.json";
  int alpha = 1;

  auto* vw = gamma->add_subcommand("validate-weight", "check the periodicity conditions");
  vw->add_option("--weight", weight, "named weight or JSON table file");
  vw->add_option("--d", d_param)->required();
  vw->add_option("--axis", axis_name);
  vw->add_option("--out", out_file);

  auto* build = gamma->add_subcommand("build", "build a Gamma/Lambda block operator");
  build->add_option("--weight", weight);
  build->add_option("--d", d_param)->required();
  build->add_option("--alpha", alpha)->required();
  build->add_option("--axis", axis_name);
  build->add_option("--out", out_file);

  auto* spec = gamma->add_subcommand("spectrum", "per-point eigenvalues as CSV");
  spec->add_option("--weight", weight);
  spec->add_option("--d", d_param)->required();
  spec->add_option("--alpha", alpha)->required();
  spec->add_option("--axis", axis_name);
  spec->add_option("--out", out_file);

  auto* su3 = gamma->add_subcommand("su3-family", "build the eight-member SU(3) family");
  bool su3_dump = false;
  su3->add_flag("--dump", su3_dump, "write the eight operators");
  su3->add_option("--out", out_file);

  auto* expect_cmd = gamma->add_subcommand("expect", "expectation value of an operator");
  expect_cmd->add_option("--op", op_file)->required();
  expect_cmd->add_option("--state", state_file)->required();
  expect_cmd->add_option("--out", out_file);

  // ---- bloch ----------------------------------------------------------
  auto* bloch = app.add_subcommand("bloch", "Bloch-ball coordinates and fill");
  bloch->require_subcommand(1);
  auto* coords = bloch->add_subcommand("coords", "coordinates of a state");
  coords->add_option("--state", state_file)->required();
  coords->add_option("--out", out_file);
  auto* fill = bloch->add_subcommand("fill", "achieve the requested radii");
  std::string radii = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  fill->add_option("--radii", radii);
  fill->add_option("--out", out_file);
  auto* sample = bloch->add_subcommand("sample", "random-state cloud as CSV");
  int n_samples = 1000;
  sample->add_option("--n", n_samples);
  sample->add_option("--out", out_file);

  // ---- bell -----------------------------------------------------------
  auto* bell = app.add_subcommand("bell", "CHSH experiments");
  bell->require_subcommand(1);
  auto* scan = bell->add_subcommand("scan", "epsilon scan of the block-Bell violation");
  std::string windows = "1,3,5,7,9,11";
  int bj0 = 6, bl0 = 2;
  scan->add_option("--j0", bj0);
  scan->add_option("--l0", bl0);
  scan->add_option("--windows", windows, "odd window widths in cells");
  auto* chsh_cmd = bell->add_subcommand("chsh", "single CHSH optimization");
  bool product_control = false;
  chsh_cmd->add_flag("--product", product_control, "separable control state");
  chsh_cmd->add_option("--out", out_file);

  // ---- compile --------------------------------------------------------
  auto* compile_cmd = app.add_subcommand("compile", "compile a target into a gate program");
  bool sigma_flag = false;
  int sj = 0, sk = 1;
  compile_cmd->add_option("--d", d_param)->required();
  compile_cmd->add_option("--alpha", alpha);
  compile_cmd->add_option("--axis", axis_name);
  compile_cmd->add_flag("--sigma,--reflections", sigma_flag, "reflection-built pair swap");
  compile_cmd->add_option("--sj", sj, "sigma region j (0-based)");
  compile_cmd->add_option("--sk", sk, "sigma region k (0-based)");
  compile_cmd->add_option("--out", out_file);

  // ---- interf ---------------------------------------------------------
  auto* interf = app.add_subcommand("interf", "Mach-Zehnder simulation");
  interf->require_subcommand(1);
  std::string program_file = "program.json";
  double eta = 0.0;
  int port = 1;
  auto* readout = interf->add_subcommand("readout", "port probabilities");
  readout->add_option("--program", program_file)->required();
  readout->add_option("--eta", eta);
  readout->add_option("--state", state_file)->required();
  readout->add_option("--out", out_file);
  auto* output = interf->add_subcommand("output", "post-selected output state");
  output->add_option("--program", program_file)->required();
  output->add_option("--eta", eta);
  output->add_option("--port", port);
  output->add_option("--state", state_file)->required();
  output->add_option("--out", out_file);

  // ---- rerun ----------------------------------------------------------
  auto* rerun = app.add_subcommand("rerun", "re-execute a stored manifest");
  std::string manifest_file;
  rerun->add_option("--manifest", manifest_file)->required();

  app.parse(argc, argv);

  if (rerun->parsed()) {
    const RunManifest m = manifest_from_json(load(manifest_file));
    std::vector<std::string> args = m.parameters;
    std::vector<char*> cargv;
    static const std::string prog = "mvlab";
    cargv.push_back(const_cast<char*>(prog.c_str()));
    for (auto& a : args) cargv.push_back(const_cast<char*>(a.c_str()));
    return run_cli(int(cargv.size()), cargv.data());
  }

  std::vector<std::string> tail(argv + 1, argv + argc);
  Runner run(opts, tail);
  const ModularGrid g = run.grid();
  const Axis axis = (axis_name == "k") ? Axis::K : Axis::Theta;

  if (prep->parsed()) {
    ModularState s = [&] {
      if (kind == "block_qubit") return prepare_block_qubit(g, j0, l0, d_param, parse_spinor(spinor));
      if (kind == "gaussian") return prepare_gaussian(g, center, width);
      if (kind == "comb") return prepare_comb(g, j0);
      if (kind == "cat") return prepare_cat(g, center, center2, width, rel_phase);
      throw std::invalid_argument("unknown state kind: " + kind);
    }();
    run.write_json(out_file, state_to_json(s));
    run.finish("state prepare");
    return 0;
  }
  if (zak->parsed()) {
    const json j = load(in_file);
    if (zak_inverse)
      run.write_json(out_file, state_to_json(mvlab::zak_inverse(modular_state_from_json(j))));
    else
      run.write_json(out_file, state_to_json(mvlab::zak_forward(position_state_from_json(j))));
    run.finish("state zak");
    return 0;
  }
  if (apply->parsed()) {
    const GateSpec gate = gate_from_json(json::parse(gate_json));
    const json j = load(in_file);
    if (j.value("representation", "modular") == "modular")
      run.write_json(out_file, state_to_json(apply_gate(gate, modular_state_from_json(j))));
    else
      run.write_json(out_file, state_to_json(apply_gate(gate, position_state_from_json(j))));
    run.finish("state apply-gate");
    return 0;
  }
  if (inner->parsed()) {
    const ModularState a = modular_state_from_json(load(in_file));
    const ModularState b = modular_state_from_json(load(in_b));
    const Complex v = inner_product(a, b);
    run.write_json(out_file, json{{"re", v.real()}, {"im", v.imag()}});
    run.finish("state inner");
    return 0;
  }

  if (vw->parsed()) {
    const WeightTable F = resolve_weight(weight, g);
    const WeightValidation v = validate_weight(F, g, d_param, axis);
    run.write_json(out_file, validation_to_json(v));
    run.finish("gamma validate-weight");
    if (!v.pass) {
      std::cerr << "weight '" << weight << "' fails for d=" << d_param
                << ": roots residual " << v.roots_residual << "\n";
      return 2;
    }
    return 0;
  }
  if (build->parsed()) {
    const BlockOperator op = build_gamma(g, d_param, alpha, resolve_weight(weight, g), axis);
    run.write_json(out_file, block_operator_to_json(op));
    run.finish("gamma build");
    return 0;
  }
  if (spec->parsed()) {
    const BlockOperator op = build_gamma(g, d_param, alpha, resolve_weight(weight, g), axis);
    run.write_text(out_file, spectrum_to_csv(op));
    run.finish("gamma spectrum");
    return 0;
  }
  if (su3->parsed()) {
    const Su3Family fam = build_su3_family(g);
    json rep{{"min_gram_rank", fam.min_gram_rank},
             {"closure_residual", fam.closure_residual},
             {"deficient_point", fam.deficient_point}};
    if (su3_dump)
      for (int i = 0; i < 8; ++i)
        run.write_json("su3_op" + std::to_string(i + 1) + ".json",
                       block_operator_to_json(fam.ops[i]));
    run.write_json(out_file, rep);
    run.finish("gamma su3-family");
    return 0;
  }
  if (expect_cmd->parsed()) {
    const BlockOperator op = block_operator_from_json(load(op_file));
    const ModularState s = modular_state_from_json(load(state_file));
    const Complex v = expectation(op, s);
    run.write_json(out_file, json{{"re", v.real()}, {"im", v.imag()}});
    run.finish("gamma expect");
    return 0;
  }

  if (coords->parsed()) {
    const BlochFrame f = make_bloch_frame(g);
    const BlochPoint p = bloch_coords(modular_state_from_json(load(state_file)), f);
    run.write_json(out_file,
                   json{{"x", p.x}, {"y", p.y}, {"z", p.z}, {"radius", p.radius()}});
    run.finish("bloch coords");
    return 0;
  }
  if (fill->parsed()) {
    const BlochFrame f = make_bloch_frame(g);
    std::string csv = "# seed=" + std::to_string(opts.seed) + "\nrequested,achieved,x,y,z\n";
    for (const BallFillRow& row : sample_ball_fill(f, parse_doubles(radii)))
      csv += fmt(row.requested) + "," + fmt(row.achieved) + "," + fmt(row.point.x) + "," +
             fmt(row.point.y) + "," + fmt(row.point.z) + "\n";
    run.write_text(out_file, csv);
    run.finish("bloch fill");
    return 0;
  }
  if (sample->parsed()) {
    const BlochFrame f = make_bloch_frame(g);
    std::string csv = "# seed=" + std::to_string(opts.seed) + "\nx,y,z,radius\n";
    for (int i = 0; i < n_samples; ++i) {
      const BlochPoint p = bloch_coords(random_state(g, opts.seed + i), f);
      csv += fmt(p.x) + "," + fmt(p.y) + "," + fmt(p.z) + "," + fmt(p.radius()) + "\n";
    }
    run.write_text(out_file, csv);
    run.finish("bloch sample");
    return 0;
  }

  if (scan->parsed()) {
    const BlochFrame f = make_bloch_frame(g);
    std::string csv =
        "# seed=" + std::to_string(opts.seed) +
        "\nepsilon,theta0,k0,p1,a1,p1p,a1p,p2,a2,p2p,a2p,S\n";
    double best_s = -1e300;
    int best_w = 1;
    ChshResult best{};
    for (const int w : parse_ints(windows)) {
      const BipartiteState s = block_bell_state(g, bj0, bl0, w);
      const ChshResult r = chsh_optimize(s, f, f);
      if (r.value > best_s) {
        best_s = r.value;
        best_w = w;
        best = r;
      }
      auto ang = [](const Eigen::Vector3d& u) {
        return std::make_pair(std::acos(std::clamp(u.z(), -1.0, 1.0)), std::atan2(u.y(), u.x()));
      };
      const auto [p1a, a1a] = ang(r.u1);
      const auto [p1b, a1b] = ang(r.u1p);
      const auto [p2a, a2a] = ang(r.u2);
      const auto [p2b, a2b] = ang(r.u2p);
      csv += fmt(w * g.delta_theta()) + "," + fmt(g.theta_bar(bj0)) + "," + fmt(g.k_bar(bl0)) +
             "," + fmt(p1a) + "," + fmt(a1a) + "," + fmt(p1b) + "," + fmt(a1b) + "," + fmt(p2a) +
             "," + fmt(a2a) + "," + fmt(p2b) + "," + fmt(a2b) + "," + fmt(r.value) + "\n";
    }
    run.write_text("chsh_scan.csv", csv);
    const BipartiteState best_state = block_bell_state(g, bj0, bl0, best_w);
    json cert{{"best_S", best_s},
              {"window_cells", best_w},
              {"epsilon", best_w * g.delta_theta()},
              {"j0", bj0},
              {"l0", bl0},
              {"u1", {best.u1.x(), best.u1.y(), best.u1.z()}},
              {"u1p", {best.u1p.x(), best.u1p.y(), best.u1p.z()}},
              {"u2", {best.u2.x(), best.u2.y(), best.u2.z()}},
              {"u2p", {best.u2p.x(), best.u2p.y(), best.u2p.z()}},
              {"violates_local_realism", best_s > 2.0}};
    run.write_json("chsh_certificate.json", cert);
    run.finish("bell scan");
    return 0;
  }
  if (chsh_cmd->parsed()) {
    const BlochFrame f = make_bloch_frame(g);
    json rep;
    if (product_control) {
      const ModularState a = block_eigenstate(f, f.unit_weight_points.at(0), {0, 0, 1}, +1);
      const ModularState b = block_eigenstate(f, f.unit_weight_points.at(1), {1, 0, 0}, +1);
      const ChshResult r = chsh_optimize(tensor_product_state(a, b), f, f);
      rep = {{"S", r.value}, {"kind", "product-control"}};
    } else {
      const BipartiteState s = block_bell_state(g, bj0, bl0, 1);
      const ChshResult r = chsh_optimize(s, f, f);
      rep = {{"S", r.value}, {"kind", "block-bell"}};
    }
    run.write_json(out_file, rep);
    run.finish("bell chsh");
    return 0;
  }

  if (compile_cmd->parsed()) {
    TargetSpec t;
    t.d = d_param;
    t.alpha = alpha;
    t.axis = axis;
    t.sigma = sigma_flag;
    t.sigma_j = sj;
    t.sigma_k = sk;
    const GateProgram p = compile_gamma(t, g);
    const VerifyReport rep = verify(p, t, g);
    std::cout << program_listing(p) << "verification: " << (rep.pass ? "pass" : "FAIL")
              << " (max deviation " << rep.max_deviation << ")\n";
    run.write_json(out_file, program_to_json(p));
    run.write_json("verify_report.json", verify_report_to_json(rep));
    run.finish("compile");
    if (!rep.pass) {
      std::cerr << "verification failed for " << rep.target << ": deviation " << rep.max_deviation
                << "\n";
      return 3;
    }
    return 0;
  }

  if (readout->parsed() || output->parsed()) {
    const GateProgram p = program_from_json(load(program_file));
    if (!p.node) throw std::invalid_argument("program has no interferometer node");
    const MatrixXcd s_arm = sequence_to_matrix(p.node->arm_s, g);
    const MatrixXcd d_arm = sequence_to_matrix(p.node->arm_d, g);
    const ModularState s = modular_state_from_json(load(state_file));
    if (readout->parsed()) {
      const MzProbabilities pr = mz_probabilities(s_arm, d_arm, eta, s);
      run.write_json(out_file, json{{"p1", pr.p1}, {"p2", pr.p2}, {"eta", eta}});
      run.finish("interf readout");
    } else {
      const MzOutput o = mz_output_state(s_arm, d_arm, eta, port, s);
      run.write_json(out_file, state_to_json(o.state));
      run.write_json("interf_output_report.json",
                     json{{"success_probability", o.success_probability}, {"port", port}});
      run.finish("interf output");
    }
    return 0;
  }

  throw CLI::ValidationError("subcommand", "nothing to do");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

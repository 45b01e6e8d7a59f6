// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.  Exits nonzero if any fails.
// argv[1]: path to the CLI binary (needed for the determinism criterion).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>

#include "mvlab/io.hpp"

using namespace mvlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] %d. %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(), secs,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

const ModularGrid g48 = make_grid(48, 8);

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, "Zak unitarity: roundtrip and inner products to 1e-12, 100 states",
            [](std::string& detail) {
              double worst_rt = 0.0, worst_ip = 0.0;
              for (int i = 0; i < 100; ++i) {
                const ModularState m = random_state(g48, 10000 + i);
                const ModularState back = zak_forward(zak_inverse(m));
                worst_rt = std::max(worst_rt, (back.amp - m.amp).cwiseAbs().maxCoeff());
                const ModularState m2 = random_state(g48, 20000 + i);
                worst_ip = std::max(worst_ip, std::abs(inner_product(m, m2) -
                                                       inner_product(zak_inverse(m), zak_inverse(m2))));
              }
              char buf[96];
              std::snprintf(buf, sizeof buf, "roundtrip %.2e, inner %.2e", worst_rt, worst_ip);
              detail = buf;
              return worst_rt <= 1e-12 && worst_ip <= 1e-12;
            });

  criterion(2, "weight validation: cos2 d=2 passes, exp3 d=3 passes, cos d=3 fails",
            [](std::string& detail) {
              const WeightValidation a = validate_weight(named_weight("cos2", g48), g48, 2, Axis::Theta);
              const WeightValidation b = validate_weight(named_weight("exp3", g48), g48, 3, Axis::Theta);
              const WeightValidation c = validate_weight(named_weight("cos1", g48), g48, 3, Axis::Theta);
              char buf[96];
              std::snprintf(buf, sizeof buf, "failing residual %.3f", c.roots_residual);
              detail = buf;
              return a.pass && a.root_branch == 1 && b.pass && b.root_branch == 1 && !c.pass &&
                     c.roots_residual > 0.1;
            });

  criterion(3, "block algebra: Pauli commutation < 1e-10, SU(3) rank 8 and closure < 1e-8",
            [](std::string& detail) {
              const WeightSpec w = make_weight(named_weight("cos2", g48), g48, 2, Axis::Theta);
              const ConventionTable t = build_convention_table(g48, 2, Axis::Theta);
              const BlockOperator trio[3] = {build_gamma(w, pauli_index_map(1), t),
                                             build_gamma(w, pauli_index_map(2), t),
                                             build_gamma(w, pauli_index_map(3), t)};
              const MatrixXcd fund = fundamental_samples(w.samples, g48, 2, Axis::Theta);
              const int eps[3][3] = {{0, 3, -2}, {-3, 0, 1}, {2, -1, 0}};
              double worst = 0.0;
              for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                  if (a == b) continue;
                  const BlockOperator comm = block_commutator(trio[a], trio[b]);
                  const int c = std::abs(eps[a][b]) - 1;
                  const double sign = eps[a][b] > 0 ? 1.0 : -1.0;
                  for (int jf = 0; jf < comm.fund_theta_count(); ++jf)
                    for (int lf = 0; lf < comm.fund_k_count(); ++lf) {
                      const int f = comm.fund_index(jf, lf);
                      const double zeta = fund(jf, lf).real();
                      const MatrixXcd sigma_c =
                          to_convention_block(t, trio[c].blocks[f], f) /
                          (std::abs(zeta) > 1e-14 ? zeta : 1.0);
                      if (std::abs(zeta) < 1e-14) continue;
                      const MatrixXcd expected = from_convention_block(
                          t, Complex(0, 2.0) * sign * zeta * zeta * sigma_c, f);
                      worst = std::max(worst,
                                       (comm.blocks[f] - expected).cwiseAbs().maxCoeff());
                    }
                }
              const Su3Family fam = build_su3_family(g48);
              char buf[96];
              std::snprintf(buf, sizeof buf, "pauli %.2e, rank %d, closure %.2e", worst,
                            fam.min_gram_rank, fam.closure_residual);
              detail = buf;
              return worst < 1e-10 && fam.min_gram_rank == 8 && fam.closure_residual < 1e-8;
            });

  criterion(4, "gate-vs-block equivalence and compile+verify for all targets",
            [](std::string& detail) {
              bool ok = true;
              double worst_block = 0.0, worst_eq = 0.0, worst_dev = 0.0;
              const ConventionTable t = build_convention_table(g48, 2, Axis::Theta);
              for (int alpha_f = 1; alpha_f <= 3; ++alpha_f) {
                const GateGammaReport r = gamma_via_gates(g48, 2, alpha_f);
                worst_block = std::max(worst_block, r.off_block_residual);
                // rebuild from the extracted convention-basis weights
                double dev = 0.0;
                for (int f = 0; f < r.op.fund_count(); ++f) {
                  const MatrixXcd rebuilt = from_convention_block(
                      t, r.weight(f) * gellmann(2, r.standard_alpha), f);
                  dev = std::max(dev, (rebuilt - r.op.blocks[f]).cwiseAbs().maxCoeff());
                }
                worst_eq = std::max(worst_eq, dev);
                ok = ok && r.off_block_residual < 1e-10 && dev < 1e-8;
              }
              int verified = 0;
              for (const TargetSpec& target : supported_targets(g48)) {
                const VerifyReport rep = verify(compile_gamma(target, g48), target, g48);
                worst_dev = std::max(worst_dev, rep.max_deviation);
                ok = ok && rep.pass;
                ++verified;
              }
              char buf[128];
              std::snprintf(buf, sizeof buf,
                            "block %.2e, rebuild %.2e, %d targets verified at %.2e", worst_block,
                            worst_eq, verified, worst_dev);
              detail = buf;
              return ok;
            });

  criterion(5, "Bloch bound over 1e4 random states and ball fill to 1e-6",
            [](std::string& detail) {
              const BlochFrame f = make_bloch_frame(g48);
              double max_r = 0.0;
              for (int i = 0; i < 10000; ++i)
                max_r = std::max(max_r, bloch_coords(random_state(g48, 90000 + i), f).radius());
              double worst_fill = 0.0;
              std::vector<double> radii;
              for (int i = 0; i <= 10; ++i) radii.push_back(0.1 * i);
              for (const BallFillRow& row : sample_ball_fill(f, radii))
                worst_fill = std::max(worst_fill, std::abs(row.achieved - row.requested));
              char buf[96];
              std::snprintf(buf, sizeof buf, "max radius %.12f, fill error %.2e", max_r,
                            worst_fill);
              detail = buf;
              return max_r <= 1.0 + 1e-9 && worst_fill < 1e-6;
            });

  criterion(6, "CHSH: separable control <= 2, scan exceeds 2.5, Tsirelson bound holds",
            [](std::string& detail) {
              const BlochFrame f = make_bloch_frame(g48);
              const double tsirelson = 2.0 * std::sqrt(2.0) + 1e-9;
              double global_max = 0.0;

              const ModularState a = block_eigenstate(f, f.unit_weight_points.at(0), {0, 0, 1}, 1);
              const ModularState b = block_eigenstate(f, f.unit_weight_points.at(1), {1, 0, 0}, 1);
              const ChshResult control = chsh_optimize(tensor_product_state(a, b), f, f);
              global_max = std::max(global_max, control.value);

              double best_s = 0.0, small_eps_s = 0.0;
              bool monotone_envelope = true;
              double prev = 1e300;
              for (const int w : {1, 3, 5, 7, 9, 11}) {
                const ChshResult r = chsh_optimize(block_bell_state(g48, 6, 2, w), f, f);
                if (w == 1) small_eps_s = r.value;
                best_s = std::max(best_s, r.value);
                global_max = std::max(global_max, r.value);
                monotone_envelope = monotone_envelope && (r.value <= prev + 1e-9);
                prev = r.value;
              }
              char buf[128];
              std::snprintf(buf, sizeof buf,
                            "control %.6f, S(min eps) %.4f, best %.4f, monotone %d",
                            control.value, small_eps_s, best_s, int(monotone_envelope));
              detail = buf;
              return control.value <= 2.0 + 1e-6 && best_s > 2.0 && small_eps_s >= 2.5 &&
                     global_max <= tsirelson && monotone_envelope;
            });

  criterion(7, "interferometer readout identity over 100 random states",
            [](std::string& detail) {
              GateProgram swap_prog;
              swap_prog.pre = sigma_swap_reflections(2, 0, 1);
              const MatrixXcd s_arm = program_to_matrix(swap_prog, g48);
              const MatrixXcd d_arm = 0.5 * gate_to_matrix(GateSpec::z(1.0), g48);
              const MatrixXcd gamma = s_arm * d_arm + (s_arm * d_arm).adjoint();
              double worst = 0.0, worst_sum = 0.0;
              bool in_range = true;
              for (int i = 0; i < 100; ++i) {
                const ModularState r = random_state(g48, 70000 + i);
                const MzProbabilities pr = mz_probabilities(s_arm, d_arm, 0.0, r);
                worst = std::max(worst,
                                 std::abs(2.0 * (pr.p1 - pr.p2) - expectation(gamma, r).real()));
                worst_sum = std::max(worst_sum, std::abs(pr.p1 + pr.p2 - 1.0));
                in_range = in_range && pr.p1 >= -1e-12 && pr.p1 <= 1.0 + 1e-12 &&
                           pr.p2 >= -1e-12 && pr.p2 <= 1.0 + 1e-12;
              }
              char buf[96];
              std::snprintf(buf, sizeof buf, "readout %.2e, sum %.2e", worst, worst_sum);
              detail = buf;
              return worst < 1e-10 && worst_sum < 1e-10 && in_range;
            });

  criterion(8, "entangling gate: operator Schmidt ranks and output entropy",
            [](std::string& detail) {
              MatrixXcd sep(g48.total_dim(), g48.total_dim()), ent(g48.total_dim(), g48.total_dim());
              for (int j1 = 0; j1 < g48.m_theta; ++j1)
                for (int l1 = 0; l1 < g48.n_k; ++l1)
                  for (int j2 = 0; j2 < g48.m_theta; ++j2)
                    for (int l2 = 0; l2 < g48.n_k; ++l2) {
                      const double t1 = g48.theta_bar(j1) - kPi * g48.k_bar(l1);
                      const double t2 = g48.theta_bar(j2) - kPi * g48.k_bar(l2);
                      sep(g48.mod_index(j1, l1), g48.mod_index(j2, l2)) =
                          std::cos(t1) * std::cos(t2);
                      ent(g48.mod_index(j1, l1), g48.mod_index(j2, l2)) = std::cos(t1 + t2);
                    }
              const BipartiteOperator g_sep = build_bipartite_gamma(g48, g48, 2, 2, 1, 1, sep);
              const BipartiteOperator g_ent = build_bipartite_gamma(g48, g48, 2, 2, 1, 1, ent);
              const int rank_sep = operator_schmidt_rank(g_sep);
              const int rank_ent = operator_schmidt_rank(g_ent);

              const ModularState a =
                  prepare_block_qubit(g48, 3, 0, 2, {Complex(1, 0), Complex(0, 0)});
              const BipartiteState prod = tensor_product_state(a, a);
              const BipartiteState evolved = entangling_evolution(g_ent, 0.5 * kPi, prod);
              const double entropy = schmidt_entropy(schmidt_decompose(evolved).coefficients);
              char buf[96];
              std::snprintf(buf, sizeof buf, "ranks sep %d / ent %d, entropy %.3f nats", rank_sep,
                            rank_ent, entropy);
              detail = buf;
              return rank_sep == 1 && rank_ent >= 2 && entropy > 0.1;
            });

  criterion(9, "determinism: rerunning CLI commands reproduces byte-identical outputs",
            [cli](std::string& detail) {
              if (cli.empty()) {
                detail = "CLI path not provided";
                return false;
              }
              const fs::path base = fs::temp_directory_path() / "mvlab_acceptance";
              fs::remove_all(base);
              fs::create_directories(base / "a");
              fs::create_directories(base / "b");
              const std::vector<std::string> commands = {
                  "state prepare --kind block_qubit --j0 0 --l0 0 --d 2 --spinor \"1,0;0,0\" --out s.json",
                  "gamma spectrum --weight cos2 --d 2 --alpha 1 --out spec.csv",
                  "bloch fill --out fill.csv",
                  "bell chsh --product --out chsh.json"};
              const std::vector<std::string> files = {"s.json", "spec.csv", "fill.csv",
                                                      "chsh.json"};
              for (const std::string dir : {"a", "b"})
                for (const auto& cmd : commands) {
                  const std::string full = cli + " --out-dir " + (base / dir).string() + " " +
                                           cmd + " > /dev/null 2>&1";
                  if (std::system(full.c_str()) != 0) {
                    detail = "command failed: " + cmd;
                    return false;
                  }
                }
              for (const auto& f : files) {
                const std::string a = read_file((base / "a" / f).string());
                const std::string b = read_file((base / "b" / f).string());
                if (a != b || a.empty()) {
                  detail = "mismatch in " + f;
                  return false;
                }
              }
              detail = std::to_string(files.size()) + " outputs byte-identical";
              return true;
            });

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
